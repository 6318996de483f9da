// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/reduced.hpp"

#include <cmath>

namespace bfd {

Parameterization Parameterization::full(int num_channels, int filter_length) {
    Parameterization p;
    p.kind_ = Kind::full;
    p.num_channels_ = num_channels;
    p.filter_length_ = filter_length;
    p.full_size_ = num_channels * filter_length;
    p.pairs_.reserve(static_cast<size_t>(p.full_size_));
    for (int i = 0; i < p.full_size_; ++i) p.pairs_.push_back({i, -1});
    return p;
}

Parameterization Parameterization::symmetric(const ArrayGeometry& geom,
                                             int filter_length) {
    if (!geom.is_symmetric())
        throw AsymmetricGeometry(
            "symmetric parameterization requires mirrored element positions");
    const int n_ch = geom.num_elements();
    Parameterization p;
    p.kind_ = Kind::symmetric;
    p.num_channels_ = n_ch;
    p.filter_length_ = filter_length;
    p.full_size_ = n_ch * filter_length;
    for (int n = 0; n < (n_ch + 1) / 2; ++n) {
        const int mirror_n = n_ch - 1 - n;
        for (int l = 0; l < filter_length; ++l) {
            p.pairs_.push_back(
                {flat_index(n, l, filter_length),
                 mirror_n == n ? -1 : flat_index(mirror_n, l, filter_length)});
        }
    }
    return p;
}

Parameterization Parameterization::linear_phase(const ArrayGeometry& geom,
                                                int filter_length) {
    if (!geom.is_symmetric())
        throw AsymmetricGeometry(
            "linear-phase parameterization requires mirrored element positions");
    const int n_ch = geom.num_elements();
    Parameterization p;
    p.kind_ = Kind::linear_phase;
    p.num_channels_ = n_ch;
    p.filter_length_ = filter_length;
    p.full_size_ = n_ch * filter_length;
    for (int n = 0; n < n_ch / 2; ++n) {
        const int mirror_n = n_ch - 1 - n;
        for (int l = 0; l < filter_length; ++l) {
            p.pairs_.push_back(
                {flat_index(n, l, filter_length),
                 flat_index(mirror_n, filter_length - 1 - l, filter_length)});
        }
    }
    if (n_ch % 2 == 1) {
        // Center element pairs with itself through tap reversal.
        const int n = n_ch / 2;
        for (int l = 0; l < (filter_length + 1) / 2; ++l) {
            const int mirror_l = filter_length - 1 - l;
            p.pairs_.push_back(
                {flat_index(n, l, filter_length),
                 mirror_l == l ? -1 : flat_index(n, mirror_l, filter_length)});
        }
    }
    return p;
}

Eigen::VectorXd Parameterization::expand(const Eigen::VectorXd& reduced) const {
    if (reduced.size() != reduced_size())
        throw ShapeMismatch("Parameterization::expand: size mismatch");
    Eigen::VectorXd full = Eigen::VectorXd::Zero(full_size_);
    for (int j = 0; j < reduced_size(); ++j) {
        full[pairs_[static_cast<size_t>(j)].primary] = reduced[j];
        if (pairs_[static_cast<size_t>(j)].mirror >= 0)
            full[pairs_[static_cast<size_t>(j)].mirror] = reduced[j];
    }
    return full;
}

FilterBank Parameterization::expand_bank(const Eigen::VectorXd& reduced) const {
    return FilterBank::from_flat(expand(reduced), num_channels_, filter_length_);
}

Eigen::VectorXd Parameterization::reduce_row(const Eigen::VectorXd& row) const {
    if (row.size() != full_size_)
        throw ShapeMismatch("Parameterization::reduce_row: size mismatch");
    Eigen::VectorXd out(reduced_size());
    for (int j = 0; j < reduced_size(); ++j) {
        double v = row[pairs_[static_cast<size_t>(j)].primary];
        if (pairs_[static_cast<size_t>(j)].mirror >= 0)
            v += row[pairs_[static_cast<size_t>(j)].mirror];
        out[j] = v;
    }
    return out;
}

Eigen::VectorXcd Parameterization::reduce_row(const Eigen::VectorXcd& row) const {
    if (row.size() != full_size_)
        throw ShapeMismatch("Parameterization::reduce_row: size mismatch");
    Eigen::VectorXcd out(reduced_size());
    for (int j = 0; j < reduced_size(); ++j) {
        Complex v = row[pairs_[static_cast<size_t>(j)].primary];
        if (pairs_[static_cast<size_t>(j)].mirror >= 0)
            v += row[pairs_[static_cast<size_t>(j)].mirror];
        out[j] = v;
    }
    return out;
}

Eigen::VectorXd Parameterization::column_weights() const {
    Eigen::VectorXd w(reduced_size());
    for (int j = 0; j < reduced_size(); ++j)
        w[j] = pairs_[static_cast<size_t>(j)].mirror >= 0 ? std::sqrt(2.0) : 1.0;
    return w;
}

Eigen::VectorXcd reduced_steering_symmetric(const ArrayGeometry& geom,
                                            int filter_length, double omega,
                                            double theta) {
    if (!geom.is_symmetric())
        throw AsymmetricGeometry("reduced_steering_symmetric: asymmetric array");
    const int n_ch = geom.num_elements();
    const int n_rep = (n_ch + 1) / 2;
    Eigen::VectorXcd g(static_cast<Eigen::Index>(n_rep) * filter_length);
    Eigen::Index j = 0;
    for (int n = 0; n < n_rep; ++n) {
        const double a_n = geom.delay_samples(n, theta);
        const bool self = (n_ch - 1 - n) == n;
        const double amp = self ? 1.0 : 2.0 * std::cos(omega * a_n);
        for (int l = 0; l < filter_length; ++l) {
            const double phase = -omega * static_cast<double>(l);
            g[j++] = amp * Complex(std::cos(phase), std::sin(phase));
        }
    }
    return g;
}

Eigen::VectorXcd reduced_steering_linear_phase(const ArrayGeometry& geom,
                                               int filter_length, double omega,
                                               double theta) {
    if (!geom.is_symmetric())
        throw AsymmetricGeometry("reduced_steering_linear_phase: asymmetric array");
    const int n_ch = geom.num_elements();
    const double half = 0.5 * static_cast<double>(filter_length - 1);
    const double common_phase = -omega * half;
    const Complex rot(std::cos(common_phase), std::sin(common_phase));

    const int pair_rows = n_ch / 2;
    const int center_cols = (n_ch % 2 == 1) ? (filter_length + 1) / 2 : 0;
    Eigen::VectorXcd g(static_cast<Eigen::Index>(pair_rows) * filter_length +
                       center_cols);
    Eigen::Index j = 0;
    for (int n = 0; n < pair_rows; ++n) {
        const double a_n = geom.delay_samples(n, theta);
        for (int l = 0; l < filter_length; ++l)
            g[j++] =
                2.0 * std::cos(omega * (a_n + static_cast<double>(l) - half)) *
                rot;
    }
    if (center_cols > 0) {
        const int n = n_ch / 2;
        const double a_n = geom.delay_samples(n, theta);
        for (int l = 0; l < center_cols; ++l) {
            const bool self = (filter_length - 1 - l) == l;
            const double amp = self ? 1.0 : 2.0;
            g[j++] =
                amp * std::cos(omega * (a_n + static_cast<double>(l) - half)) *
                rot;
        }
    }
    return g;
}

}  // namespace bfd
