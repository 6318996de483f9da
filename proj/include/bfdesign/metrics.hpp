// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bfdesign/cone.hpp"
#include "bfdesign/geometry.hpp"
#include "bfdesign/sampling.hpp"

namespace bfd {

inline double amp_to_db(double v) { return 20.0 * std::log10(v); }
inline double db_to_amp(double db) { return std::pow(10.0, db / 20.0); }
inline double power_to_db(double v) { return 10.0 * std::log10(v); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

// Which cost function J_sol is reported: the one-shot convex designs use the
// complex passband error max |B - Bd|; the iterative design uses the
// magnitude-squared error max ||B|^2 - |Bd|^2|.
enum class DesignFamily { convex, iterative };

struct MetricsConfig {
    int freq_points = 200;
    int angle_points = 200;
    bool beampattern_full_angle = true;  // CSV grid spans [0, pi]
};

struct IterationRecord {
    int k = 0;
    double objective = 0.0;
    double delta_rlx = 0.0;
    double delta_norm = 0.0;
    double sigma_tau_estimate = 0.0;
    std::string path;
};

// Evaluation summary for a designed beamformer.
struct DesignReport {
    // headline metrics
    double passband_ripple_db = 0.0;   // A_p
    double stopband_atten_db = 0.0;    // A_a
    double tau_avg_samples = 0.0;
    double sigma_tau_samples = 0.0;
    double j_sol = 0.0;
    double min_wng_db = 0.0;
    int delay_guard_skips = 0;

    // per-angle group-delay deviation over the passband
    Eigen::VectorXd pb_thetas;
    Eigen::VectorXd sigma_tau_theta;

    // white noise gain curve
    Eigen::VectorXd wng_omegas;
    Eigen::VectorXd wng_db;

    // beampattern grid for export (frequency band x angle range)
    Eigen::VectorXd bp_omegas;
    Eigen::VectorXd bp_thetas;
    Eigen::MatrixXd bp_mag_db;
    Eigen::MatrixXd bp_phase_rad;
    Eigen::MatrixXd bp_delay_samples;  // NaN where the response is null

    // provenance, filled by the design drivers
    std::string design_name;
    SolveStatus status = SolveStatus::numerical_failure;
    int solver_iterations = 0;
    int outer_iterations = 0;
    std::string solver_message;
    std::vector<IterationRecord> trace;
    std::vector<std::pair<Family, double>> certificate_families;
};

// Evaluates every quality metric of `x` for the given band layout on a dense
// uniform grid. Grid-delay extrema skip guard-tripped points and count them.
DesignReport evaluate(const ArrayGeometry& geom, const FilterBank& x,
                      const BandSpec& bands, double tau_d, DesignFamily family,
                      const MetricsConfig& cfg = {});

}  // namespace bfd
