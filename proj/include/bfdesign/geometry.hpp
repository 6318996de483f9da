// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bfdesign/errors.hpp"

namespace bfd {

// Linear array of omnidirectional microphones on a line, with signed element
// positions (meters) measured from the array origin.
class ArrayGeometry {
public:
    ArrayGeometry(std::vector<double> positions_m, double sample_rate_hz,
                  double sound_speed_mps);

    // Uniform array with `num_elements` elements spaced `spacing_m` apart,
    // centered on the origin.
    static ArrayGeometry uniform(int num_elements, double spacing_m,
                                 double sample_rate_hz, double sound_speed_mps);

    int num_elements() const { return static_cast<int>(positions_.size()); }
    double position(int n) const { return positions_[static_cast<size_t>(n)]; }
    const std::vector<double>& positions() const { return positions_; }
    double sample_rate() const { return sample_rate_hz_; }
    double sound_speed() const { return sound_speed_mps_; }

    // True iff element positions mirror about the origin:
    // position(N-1-n) == -position(n) for all n, within 1e-12 m.
    bool is_symmetric() const;

    // Propagation delay of element n in samples for arrival angle theta:
    // f_s * d_n * cos(theta) / c.
    double delay_samples(int n, double theta) const {
        return sample_rate_hz_ * positions_[static_cast<size_t>(n)] *
               std::cos(theta) / sound_speed_mps_;
    }

private:
    std::vector<double> positions_;
    double sample_rate_hz_;
    double sound_speed_mps_;
};

// Bank of N FIR filters of length L; coefficient (n, l) is the l-th tap of the
// n-th channel filter. Flattening is channel-major: the flat index of (n, l)
// is n*L + l.
class FilterBank {
public:
    FilterBank() = default;
    FilterBank(int num_channels, int filter_length)
        : coeffs_(Eigen::MatrixXd::Zero(num_channels, filter_length)) {}
    explicit FilterBank(Eigen::MatrixXd coeffs) : coeffs_(std::move(coeffs)) {}

    static FilterBank from_flat(const Eigen::VectorXd& flat, int num_channels,
                                int filter_length);

    int num_channels() const { return static_cast<int>(coeffs_.rows()); }
    int filter_length() const { return static_cast<int>(coeffs_.cols()); }
    int size() const { return static_cast<int>(coeffs_.size()); }

    double operator()(int n, int l) const { return coeffs_(n, l); }
    double& operator()(int n, int l) { return coeffs_(n, l); }
    const Eigen::MatrixXd& coeffs() const { return coeffs_; }
    Eigen::MatrixXd& coeffs() { return coeffs_; }

    Eigen::VectorXd flatten() const;

private:
    Eigen::MatrixXd coeffs_;
};

inline int flat_index(int n, int l, int filter_length) {
    return n * filter_length + l;
}

}  // namespace bfd
