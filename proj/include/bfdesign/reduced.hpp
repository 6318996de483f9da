// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bfdesign/geometry.hpp"
#include "bfdesign/response.hpp"

namespace bfd {

// Linear 0/1 tying of full coefficients to a reduced variable vector:
// x_full = expand(x_reduced). Each reduced variable drives one or two full
// coefficients (two for mirrored pairs, one for self-paired entries).
class Parameterization {
public:
    enum class Kind { full, symmetric, linear_phase };

    static Parameterization full(int num_channels, int filter_length);
    // Coefficient mirror across the array center: x_{n,l} = x_{N-1-n,l}.
    // Requires a symmetric geometry. Odd N: the center element is self-paired.
    static Parameterization symmetric(const ArrayGeometry& geom,
                                      int filter_length);
    // Coefficient reversal pairing x_{n,l} = x_{N-1-n,L-1-l}; together with a
    // symmetric geometry this forces an exactly linear phase with delay
    // (L-1)/2 samples. Odd counts self-pair the central entry.
    static Parameterization linear_phase(const ArrayGeometry& geom,
                                         int filter_length);

    Kind kind() const { return kind_; }
    int full_size() const { return full_size_; }
    int reduced_size() const { return static_cast<int>(pairs_.size()); }

    Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
    FilterBank expand_bank(const Eigen::VectorXd& reduced) const;

    // P^T u: folds a row expressed over full coefficients into reduced space.
    Eigen::VectorXd reduce_row(const Eigen::VectorXd& row) const;
    Eigen::VectorXcd reduce_row(const Eigen::VectorXcd& row) const;

    // Euclidean norm of each parameterization column (1 or sqrt(2)), so that
    // ||x_full||_2 = ||column_weights .* x_reduced||_2.
    Eigen::VectorXd column_weights() const;

    int num_channels() const { return num_channels_; }
    int filter_length() const { return filter_length_; }

private:
    struct Pair {
        int primary;
        int mirror;  // -1 when self-paired
    };
    Kind kind_ = Kind::full;
    int num_channels_ = 0;
    int filter_length_ = 0;
    int full_size_ = 0;
    std::vector<Pair> pairs_;
};

// Reduced steering vector for the symmetric parameterization:
// entry (n, l) is 2 cos(omega f_s d_n cos(theta)/c) e^{-j omega l}
// (factor 1 instead of 2 on a self-paired center element).
Eigen::VectorXcd reduced_steering_symmetric(const ArrayGeometry& geom,
                                            int filter_length, double omega,
                                            double theta);

// Reduced steering vector for the linear-phase parameterization:
// entry (n, l) is 2 cos[omega (f_s d_n cos(theta)/c + l - (L-1)/2)] times the
// common phase factor e^{-j omega (L-1)/2}.
Eigen::VectorXcd reduced_steering_linear_phase(const ArrayGeometry& geom,
                                               int filter_length, double omega,
                                               double theta);

}  // namespace bfd
