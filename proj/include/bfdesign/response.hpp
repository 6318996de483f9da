// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "bfdesign/geometry.hpp"

namespace bfd {

using Complex = std::complex<double>;

// Phase slope of element (n, l) in samples: k_nl = -f_s d_n cos(theta)/c - l.
// The steering entry for (n, l) is exp(j omega k_nl), with omega in
// radians/sample.
double phase_slope(const ArrayGeometry& geom, int n, int l, double theta);

// Stacked steering vector g(omega, theta) of length N*L, channel-major to
// match FilterBank::flatten(). Every entry has unit magnitude.
Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, int filter_length,
                                 double omega, double theta);

// Complex beamformer response B = g(omega, theta)^T x.
Complex response(const ArrayGeometry& geom, const FilterBank& x, double omega,
                 double theta);

// Per-channel filter frequency response F_n(omega) = sum_l x_{n,l} e^{-j omega l}.
Eigen::VectorXcd channel_responses(const FilterBank& x, double omega);

// White noise gain |B(omega, theta_d)|^2 / sum_n |F_n(omega)|^2.
// Throws ZeroFilterEnergy when the denominator underflows (<= 1e-300).
double white_noise_gain(const ArrayGeometry& geom, const FilterBank& x,
                        double omega, double theta_d);

// Group delay of the response at (omega, theta), in samples.
// Throws NearZeroResponse when |B|^2 < 1e-12 * ||x||_2^2.
double group_delay(const ArrayGeometry& geom, const FilterBank& x, double omega,
                   double theta);

// Gradient of the group delay with respect to the flattened coefficients.
Eigen::VectorXd group_delay_gradient(const ArrayGeometry& geom,
                                     const FilterBank& x, double omega,
                                     double theta);

// Magnitude-squared response error e_r = |B|^2 - bd_magsq and its gradient.
struct ValueGradient {
    double value;
    Eigen::VectorXd gradient;
};
ValueGradient magsq_error_gradient(const ArrayGeometry& geom,
                                   const FilterBank& x, double omega,
                                   double theta, double bd_magsq);

// WNG shortfall e_w = G_w(x, omega) - floor and its gradient.
ValueGradient wng_error_gradient(const ArrayGeometry& geom, const FilterBank& x,
                                 double omega, double theta_d, double floor);

// Matrix A(omega): N x (N*L) block-diagonal map from flattened coefficients to
// per-channel filter responses; row n is e^{-j omega l} on the taps of channel n.
Eigen::MatrixXcd wng_matrix(const ArrayGeometry& geom, int filter_length,
                            double omega);

// Batch evaluation of the response model over a frequency x angle grid.
// Rows index frequency, columns index angle.
struct GridEvaluation {
    Eigen::MatrixXcd response;     // B(omega_m, theta_k)
    Eigen::MatrixXd group_delay;   // samples; NaN where the guard tripped
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> delay_valid;
    int num_guard_skips = 0;
};
GridEvaluation evaluate_grid(const ArrayGeometry& geom, const FilterBank& x,
                             const Eigen::VectorXd& omegas,
                             const Eigen::VectorXd& thetas,
                             bool want_group_delay = true);

// Response-only fast path (no group delay bookkeeping).
Eigen::MatrixXcd response_grid(const ArrayGeometry& geom, const FilterBank& x,
                               const Eigen::VectorXd& omegas,
                               const Eigen::VectorXd& thetas);

}  // namespace bfd
