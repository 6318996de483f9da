// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bfdesign/designs.hpp"
#include "bfdesign/iterative.hpp"

namespace bfd {

enum class DesignType { v1, v1_sym, v1_lp, v2, c_a, c_a_sym, c_b };
const char* design_type_name(DesignType t);
std::optional<DesignType> parse_design_type(const std::string& s);

// Parsed run configuration. Values are stored in the units of the file
// (Hz / degrees / dB) so the report can echo them losslessly; conversions to
// the internal units happen in the to_*() helpers.
struct RunConfig {
    // [array]
    int elements = 0;
    double spacing_m = 0.0;              // used when positions_m is empty
    std::vector<double> positions_m;
    double sample_rate_hz = 8000.0;
    double sound_speed_mps = 340.0;

    // [bands]
    double freq_lo_hz = 0.0, freq_hi_hz = 0.0;
    double passband_lo_deg = 0.0, passband_hi_deg = 0.0;
    std::vector<std::pair<double, double>> stopband_deg;
    double steering_deg = 90.0;

    // [design]
    DesignType design = DesignType::v1;
    int filter_length = 20;
    std::string group_delay = "zero";  // zero | half | quarter | <samples>
    double stopband_atten_db = 6.0;
    double wng_db = 0.0;
    double lambda = 0.01;

    // [grid]
    int freq_points = 200;
    int angle_points = 200;
    GridConfig nonuniform;  // virtual/actual counts and edge points

    // [iteration]
    double slack_weight = 1000.0;
    TrustSchedule trust;
    int max_iterations = 50;
    int no_improve_window = 5;
    double eps_fine = 0.0;
    bool b_path = true;

    // [solver]
    double solver_tol = 1e-8;
    int solver_max_iterations = 100;

    // [output]
    std::string output_dir = "out";

    unsigned seed = 0;  // recorded only; no randomized paths exist

    ArrayGeometry to_geometry() const;
    BandSpec to_bands() const;
    double tau_d() const;  // samples
    ConvexDesignSpec to_convex_spec() const;
    IterativeDesignSpec to_iterative_spec() const;
    bool is_iterative() const { return design == DesignType::v2; }
    bool is_competing() const {
        return design == DesignType::c_a || design == DesignType::c_a_sym ||
               design == DesignType::c_b;
    }
};

// Parses the sectioned key = value format; throws ConfigError listing every
// violated field.
RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin = "<string>");

}  // namespace bfd
