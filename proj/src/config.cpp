// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/config.hpp"

#include "bfdesign/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bfd {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    double v;
    while (is >> v) out.push_back(v);
    return out;
}

struct KeyValue {
    std::string section;
    std::string key;
    std::string value;
};

std::vector<KeyValue> tokenize(const std::string& text,
                               const std::string& origin,
                               std::vector<std::string>& errors) {
    std::vector<KeyValue> items;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                std::ostringstream os;
                os << origin << ":" << lineno << ": malformed section header";
                errors.push_back(os.str());
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << origin << ":" << lineno << ": expected key = value";
            errors.push_back(os.str());
            continue;
        }
        items.push_back(
            {section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return items;
}

}  // namespace

const char* design_type_name(DesignType t) {
    switch (t) {
        case DesignType::v1: return "v1";
        case DesignType::v1_sym: return "v1-sym";
        case DesignType::v1_lp: return "v1-lp";
        case DesignType::v2: return "v2";
        case DesignType::c_a: return "c-a";
        case DesignType::c_a_sym: return "c-a-sym";
        case DesignType::c_b: return "c-b";
    }
    return "unknown";
}

std::optional<DesignType> parse_design_type(const std::string& s) {
    if (s == "v1") return DesignType::v1;
    if (s == "v1-sym") return DesignType::v1_sym;
    if (s == "v1-lp") return DesignType::v1_lp;
    if (s == "v2") return DesignType::v2;
    if (s == "c-a") return DesignType::c_a;
    if (s == "c-a-sym") return DesignType::c_a_sym;
    if (s == "c-b") return DesignType::c_b;
    return std::nullopt;
}

RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin) {
    std::vector<std::string> errors;
    const std::vector<KeyValue> items = tokenize(text, origin, errors);
    RunConfig cfg;
    cfg.lambda = -1.0;  // sentinel: default depends on the design type

    auto bad = [&](const KeyValue& kv, const std::string& why) {
        errors.push_back("[" + kv.section + "] " + kv.key + ": " + why);
    };
    auto want_number = [&](const KeyValue& kv, double& dst) {
        try {
            size_t pos = 0;
            const double v = std::stod(kv.value, &pos);
            if (pos != kv.value.size()) throw std::invalid_argument("");
            dst = v;
        } catch (...) {
            bad(kv, "not a number: '" + kv.value + "'");
        }
    };
    auto want_int = [&](const KeyValue& kv, int& dst) {
        double v = 0.0;
        want_number(kv, v);
        dst = static_cast<int>(std::lround(v));
    };
    auto want_bool = [&](const KeyValue& kv, bool& dst) {
        if (kv.value == "on" || kv.value == "true" || kv.value == "1")
            dst = true;
        else if (kv.value == "off" || kv.value == "false" || kv.value == "0")
            dst = false;
        else
            bad(kv, "expected on/off");
    };

    for (const KeyValue& kv : items) {
        const std::string id = kv.section + "." + kv.key;
        if (id == "array.elements") want_int(kv, cfg.elements);
        else if (id == "array.spacing_m") want_number(kv, cfg.spacing_m);
        else if (id == "array.positions_m") cfg.positions_m = parse_numbers(kv.value);
        else if (id == "array.sample_rate_hz") want_number(kv, cfg.sample_rate_hz);
        else if (id == "array.sound_speed_mps") want_number(kv, cfg.sound_speed_mps);
        else if (id == "bands.freq_hz") {
            const std::vector<double> v = parse_numbers(kv.value);
            if (v.size() != 2) bad(kv, "expected two values: lo hi");
            else {
                cfg.freq_lo_hz = v[0];
                cfg.freq_hi_hz = v[1];
            }
        } else if (id == "bands.passband_deg") {
            const std::vector<double> v = parse_numbers(kv.value);
            if (v.size() != 2) bad(kv, "expected two values: lo hi");
            else {
                cfg.passband_lo_deg = v[0];
                cfg.passband_hi_deg = v[1];
            }
        } else if (id == "bands.stopband_deg") {
            cfg.stopband_deg.clear();
            std::istringstream is(kv.value);
            std::string chunk;
            bool ok = true;
            while (std::getline(is, chunk, ',')) {
                const std::vector<double> v = parse_numbers(chunk);
                if (v.size() != 2) ok = false;
                else cfg.stopband_deg.emplace_back(v[0], v[1]);
            }
            if (!ok) bad(kv, "expected comma-separated 'lo hi' pairs");
        } else if (id == "bands.steering_deg") {
            want_number(kv, cfg.steering_deg);
        } else if (id == "design.type") {
            const auto t = parse_design_type(kv.value);
            if (!t) bad(kv, "unknown design type '" + kv.value + "'");
            else cfg.design = *t;
        } else if (id == "design.filter_length") {
            want_int(kv, cfg.filter_length);
        } else if (id == "design.group_delay") {
            cfg.group_delay = kv.value;
        } else if (id == "design.stopband_atten_db") {
            want_number(kv, cfg.stopband_atten_db);
        } else if (id == "design.wng_db") {
            want_number(kv, cfg.wng_db);
        } else if (id == "design.lambda") {
            want_number(kv, cfg.lambda);
        } else if (id == "grid.freq_points") {
            want_int(kv, cfg.freq_points);
        } else if (id == "grid.angle_points") {
            want_int(kv, cfg.angle_points);
        } else if (id == "grid.virtual_freq") {
            want_int(kv, cfg.nonuniform.virtual_freq);
        } else if (id == "grid.virtual_angle") {
            want_int(kv, cfg.nonuniform.virtual_angle);
        } else if (id == "grid.nonuniform_freq") {
            want_int(kv, cfg.nonuniform.actual_freq);
        } else if (id == "grid.nonuniform_angle") {
            want_int(kv, cfg.nonuniform.actual_angle);
        } else if (id == "grid.edge_points") {
            want_int(kv, cfg.nonuniform.edge_points);
        } else if (id == "iteration.slack_weight") {
            want_number(kv, cfg.slack_weight);
        } else if (id == "iteration.gamma_start") {
            want_number(kv, cfg.trust.gamma_start);
        } else if (id == "iteration.gamma_end") {
            want_number(kv, cfg.trust.gamma_end);
        } else if (id == "iteration.gamma_small") {
            want_number(kv, cfg.trust.gamma_small);
        } else if (id == "iteration.gamma_ramp") {
            want_int(kv, cfg.trust.ramp_length);
        } else if (id == "iteration.max_iters") {
            want_int(kv, cfg.max_iterations);
        } else if (id == "iteration.no_improve_window") {
            want_int(kv, cfg.no_improve_window);
        } else if (id == "iteration.eps_fine") {
            want_number(kv, cfg.eps_fine);
        } else if (id == "iteration.b_path") {
            want_bool(kv, cfg.b_path);
        } else if (id == "solver.tol") {
            want_number(kv, cfg.solver_tol);
        } else if (id == "solver.max_iters") {
            want_int(kv, cfg.solver_max_iterations);
        } else if (id == "output.dir") {
            cfg.output_dir = kv.value;
        } else {
            bad(kv, "unknown key");
        }
    }

    // defaults that depend on other fields
    if (cfg.lambda < 0.0)
        cfg.lambda = cfg.design == DesignType::v2 ? 0.01 : 0.0;

    // validation (collect everything before throwing)
    if (cfg.elements < 2 && cfg.positions_m.size() < 2)
        errors.push_back(
            "[array] elements: need >= 2 elements (or explicit positions_m)");
    if (cfg.positions_m.empty() && !(cfg.spacing_m > 0.0))
        errors.push_back("[array] spacing_m: must be > 0");
    if (!(cfg.sample_rate_hz > 0.0))
        errors.push_back("[array] sample_rate_hz: must be > 0");
    if (!(cfg.sound_speed_mps > 0.0))
        errors.push_back("[array] sound_speed_mps: must be > 0");
    if (!(cfg.freq_lo_hz > 0.0 && cfg.freq_lo_hz < cfg.freq_hi_hz &&
          cfg.freq_hi_hz < cfg.sample_rate_hz / 2.0))
        errors.push_back(
            "[bands] freq_hz: need 0 < lo < hi < sample_rate/2");
    if (!(cfg.passband_lo_deg < cfg.passband_hi_deg))
        errors.push_back("[bands] passband_deg: need lo < hi");
    if (!(cfg.passband_lo_deg >= 0.0 && cfg.passband_hi_deg <= 180.0))
        errors.push_back("[bands] passband_deg: must lie within [0, 180]");
    for (size_t i = 0; i < cfg.stopband_deg.size(); ++i) {
        const auto& iv = cfg.stopband_deg[i];
        if (!(iv.first < iv.second && iv.first >= 0.0 && iv.second <= 180.0)) {
            std::ostringstream os;
            os << "[bands] stopband_deg[" << i
               << "]: need 0 <= lo < hi <= 180";
            errors.push_back(os.str());
        } else if (std::max(iv.first, cfg.passband_lo_deg) <
                   std::min(iv.second, cfg.passband_hi_deg)) {
            std::ostringstream os;
            os << "[bands] stopband_deg[" << i << "]: overlaps the passband";
            errors.push_back(os.str());
        }
    }
    if (!(cfg.steering_deg >= cfg.passband_lo_deg &&
          cfg.steering_deg <= cfg.passband_hi_deg))
        errors.push_back("[bands] steering_deg: must lie inside the passband");
    if (cfg.filter_length < 1)
        errors.push_back("[design] filter_length: must be >= 1");
    if (cfg.group_delay != "zero" && cfg.group_delay != "half" &&
        cfg.group_delay != "quarter") {
        try {
            size_t pos = 0;
            (void)std::stod(cfg.group_delay, &pos);
            if (pos != cfg.group_delay.size()) throw std::invalid_argument("");
        } catch (...) {
            errors.push_back(
                "[design] group_delay: expected zero|half|quarter or a number "
                "of samples");
        }
    }
    if (cfg.freq_points < 2 || cfg.angle_points < 2)
        errors.push_back("[grid] freq_points/angle_points: must be >= 2");

    if (!errors.empty()) {
        std::string msg = "configuration errors in " + origin + ":";
        for (const std::string& e : errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_run_config_text(buf.str(), path);
}

ArrayGeometry RunConfig::to_geometry() const {
    if (!positions_m.empty())
        return ArrayGeometry(positions_m, sample_rate_hz, sound_speed_mps);
    return ArrayGeometry::uniform(elements, spacing_m, sample_rate_hz,
                                  sound_speed_mps);
}

BandSpec RunConfig::to_bands() const {
    BandSpec bands;
    bands.omega_lo = 2.0 * kPi * freq_lo_hz / sample_rate_hz;
    bands.omega_hi = 2.0 * kPi * freq_hi_hz / sample_rate_hz;
    bands.passband = {deg_to_rad(passband_lo_deg), deg_to_rad(passband_hi_deg)};
    for (const auto& iv : stopband_deg)
        bands.stopband.push_back(
            {deg_to_rad(iv.first), deg_to_rad(iv.second)});
    bands.theta_d = deg_to_rad(steering_deg);
    return bands;
}

double RunConfig::tau_d() const {
    if (group_delay == "zero") return 0.0;
    if (group_delay == "half")
        return 0.5 * static_cast<double>(filter_length - 1);
    if (group_delay == "quarter")
        return 0.25 * static_cast<double>(filter_length - 1);
    return std::stod(group_delay);
}

ConvexDesignSpec RunConfig::to_convex_spec() const {
    ConvexDesignSpec spec{to_geometry()};
    spec.bands = to_bands();
    spec.filter_length = filter_length;
    spec.stopband_ceiling = db_to_amp(-stopband_atten_db);
    spec.wng_floor = db_to_power(wng_db);
    spec.tau_d = tau_d();
    spec.lambda = is_iterative() ? 0.0 : lambda;
    spec.symmetry =
        design == DesignType::v1_sym || design == DesignType::c_a_sym;
    spec.linear_phase =
        design == DesignType::v1_lp || design == DesignType::c_b;
    spec.grid_freq = freq_points;
    spec.grid_angle = angle_points;
    return spec;
}

IterativeDesignSpec RunConfig::to_iterative_spec() const {
    IterativeDesignSpec spec{to_geometry()};
    spec.bands = to_bands();
    spec.filter_length = filter_length;
    spec.stopband_ceiling = db_to_amp(-stopband_atten_db);
    spec.wng_floor = db_to_power(wng_db);
    spec.tau_d = tau_d();
    spec.lambda = lambda;
    spec.slack_weight = slack_weight;
    spec.eps_fine = eps_fine;
    spec.trust = trust;
    spec.grid = nonuniform;
    spec.grid.mode = GridMode::nonuniform;
    spec.step1_grid_freq = freq_points;
    spec.step1_grid_angle = angle_points;
    spec.max_iterations = max_iterations;
    spec.no_improve_window = no_improve_window;
    spec.b_path = b_path;
    spec.solver.tol = solver_tol;
    spec.solver.max_iterations = solver_max_iterations;
    return spec;
}

}  // namespace bfd
