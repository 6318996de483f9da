// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "bfdesign/config.hpp"
#include "bfdesign/metrics.hpp"

namespace bfd {

// Writes the coefficient matrix as CSV (one row per channel, 17 significant
// digits so values round-trip bit exactly).
void write_coefficients_csv(const std::string& path, const FilterBank& bank);
FilterBank read_coefficients_csv(const std::string& path);

// freq_hz, theta_deg, mag_db, phase_rad, group_delay_samples
void write_beampattern_csv(const std::string& path, const DesignReport& rep,
                           double sample_rate_hz);
// freq_hz, wng_db
void write_wng_csv(const std::string& path, const DesignReport& rep,
                   double sample_rate_hz);
// theta_deg, sigma_tau_samples
void write_sigma_tau_csv(const std::string& path, const DesignReport& rep);
// k, path, objective, delta_rlx, delta_norm, sigma_tau_estimate
void write_trace_csv(const std::string& path, const DesignReport& rep);
// structured key-value summary, including the lossless config echo
void write_report_json(const std::string& path, const RunConfig& cfg,
                       const DesignReport& rep);

struct RunArtifacts {
    DesignReport report;
    FilterBank bank;
    int exit_code = 0;  // 0 optimal, 2 infeasible, 3 numerical failure
};

// Runs the configured design end to end and writes every artifact into
// cfg.output_dir (created if missing).
RunArtifacts run_design_config(const RunConfig& cfg);

// Evaluation of externally supplied coefficients against a config's bands.
RunArtifacts evaluate_coefficients(const RunConfig& cfg,
                                   const std::string& coeffs_csv);

}  // namespace bfd
