// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "bfdesign/designs.hpp"
#include "bfdesign/metrics.hpp"
#include "bfdesign/sampling.hpp"

namespace bfd {

// Per-iteration cap on ||delta||_2: a linear ramp from gamma_start down to
// gamma_end over the first ramp_length iterations, then gamma_small.
struct TrustSchedule {
    double gamma_start = 0.5;
    double gamma_end = 0.001;
    double gamma_small = 0.001;
    int ramp_length = 20;

    double at(int k) const {  // k is 1-based
        if (k >= ramp_length) return gamma_small;
        return gamma_start - (gamma_start - gamma_end) *
                                 static_cast<double>(k - 1) /
                                 static_cast<double>(ramp_length - 1);
    }
};

struct IterativeDesignSpec {
    ArrayGeometry geometry;
    BandSpec bands;
    int filter_length = 20;
    double stopband_ceiling = 0.5;  // linear
    double wng_floor = 1.0;
    double tau_d = 0.0;
    double lambda = 0.01;        // step-1 regularization on the primary path
    double slack_weight = 1000;  // W
    double eps_fine = 0.0;       // signed adjustment of the passband budget
    TrustSchedule trust;
    GridConfig grid;  // nonuniform selection (virtual/actual counts, edges)
    int step1_grid_freq = 200;
    int step1_grid_angle = 200;
    int wng_freq_count = 0;  // 0: follow step1_grid_freq
    int max_iterations = 50;
    int no_improve_window = 5;
    bool b_path = true;              // also run the unregularized start
    bool symmetric_iterates = false; // tie updates across the array center
    SolverOptions solver;

    void validate() const;
};

// Linearization of the nonconvex quantities at the current iterate.
struct LinearizedBlocks {
    Eigen::MatrixXd gd_rows;   // group-delay error gradients
    Eigen::VectorXd gd_vals;   // group-delay errors
    Eigen::MatrixXd mag_rows;  // magnitude-squared error gradients
    Eigen::VectorXd mag_vals;
    Eigen::MatrixXd wng_rows;  // WNG shortfall gradients
    Eigen::VectorXd wng_vals;
    int replaced_points = 0;   // degenerate samples swapped for next-best
};

LinearizedBlocks linearize(const ArrayGeometry& geom, const FilterBank& x,
                           const std::vector<SamplePoint>& gd_points,
                           const std::vector<SamplePoint>& mag_points,
                           const Eigen::VectorXd& wng_omegas, double tau_d,
                           double theta_d, double wng_floor);

// Passband magnitude budget from the step-1 solution: the largest
// magnitude-squared deviation over the uniform passband grid, plus eps_fine.
double compute_gamma_pb(const ArrayGeometry& geom, const FilterBank& x_sol1,
                        const BandSpec& bands, int grid_freq, int grid_angle,
                        double eps_fine);

struct IterationState {
    FilterBank x;
    int k = 0;  // 1-based index of the next iteration
    // samples of the current iteration
    std::vector<SamplePoint> gd_points;
    std::vector<SamplePoint> mag_points;
    std::vector<SamplePoint> sb_points;
    Eigen::VectorXd wng_omegas;
    LinearizedBlocks blocks;
    // last solve
    double objective = 0.0;       // ||C d + d||_inf + W * delta_rlx
    double gd_objective = 0.0;    // ||C d + d||_inf alone
    double delta_rlx = 0.0;
    double delta_norm = 0.0;
    int cone_rows = 0;
    std::vector<double> monitored;  // termination history (resets on regime switch)
    bool slack_phase = true;
};

// One linearized SOCP step; updates state.x and the bookkeeping fields.
// A failed solve retries once with a halved trust radius, then throws
// SolverFailure with the diagnostic program dump appended to `dump_path`
// (when non-empty).
void iterate_step(IterationState& state, const IterativeDesignSpec& spec,
                  double gamma_pb, const std::string& dump_path = "");

struct IterativePathResult {
    bool ran = false;
    SolveStatus step1_status = SolveStatus::numerical_failure;
    FilterBank bank;
    double gamma_pb = 0.0;
    double best_objective = std::numeric_limits<double>::infinity();
    int iterations = 0;
    double sigma_tau = std::numeric_limits<double>::infinity();
    // true when the returned bank passed the exact feasibility audit
    bool audited = false;
    std::vector<IterationRecord> trace;
    std::string label;
};

struct IterativeResult {
    SolveStatus status = SolveStatus::numerical_failure;
    FilterBank bank;
    std::string chosen_path;
    double gamma_pb = 0.0;
    double j_sol = std::numeric_limits<double>::quiet_NaN();
    IterativePathResult path_a;
    IterativePathResult path_b;
    // dense verification (5x the step-1 grid)
    double verify_mag_error = 0.0;   // max | |B|^2 - 1 | on the passband
    double verify_sb_peak = 0.0;
    double verify_min_wng = 0.0;
    bool verified = false;
    // program size bookkeeping for the sampling-reduction comparison
    int iter_cone_rows = 0;          // rows of one nonuniform iteration SOCP
    int full_grid_cone_rows = 0;     // rows the full virtual grid would need
};

IterativeResult run_two_step(const IterativeDesignSpec& spec);

}  // namespace bfd
