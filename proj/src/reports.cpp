// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/reports.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bfdesign/response.hpp"

namespace bfd {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory: " + dir);
}

double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

nlohmann::json config_echo(const RunConfig& cfg) {
    nlohmann::json j;
    j["array"]["elements"] = cfg.elements;
    j["array"]["spacing_m"] = cfg.spacing_m;
    if (!cfg.positions_m.empty()) j["array"]["positions_m"] = cfg.positions_m;
    j["array"]["sample_rate_hz"] = cfg.sample_rate_hz;
    j["array"]["sound_speed_mps"] = cfg.sound_speed_mps;
    j["bands"]["freq_hz"] = {cfg.freq_lo_hz, cfg.freq_hi_hz};
    j["bands"]["passband_deg"] = {cfg.passband_lo_deg, cfg.passband_hi_deg};
    nlohmann::json sb = nlohmann::json::array();
    for (const auto& iv : cfg.stopband_deg) sb.push_back({iv.first, iv.second});
    j["bands"]["stopband_deg"] = sb;
    j["bands"]["steering_deg"] = cfg.steering_deg;
    j["design"]["type"] = design_type_name(cfg.design);
    j["design"]["filter_length"] = cfg.filter_length;
    j["design"]["group_delay"] = cfg.group_delay;
    j["design"]["stopband_atten_db"] = cfg.stopband_atten_db;
    j["design"]["wng_db"] = cfg.wng_db;
    j["design"]["lambda"] = cfg.lambda;
    j["grid"]["freq_points"] = cfg.freq_points;
    j["grid"]["angle_points"] = cfg.angle_points;
    j["grid"]["virtual_freq"] = cfg.nonuniform.virtual_freq;
    j["grid"]["virtual_angle"] = cfg.nonuniform.virtual_angle;
    j["grid"]["nonuniform_freq"] = cfg.nonuniform.actual_freq;
    j["grid"]["nonuniform_angle"] = cfg.nonuniform.actual_angle;
    j["grid"]["edge_points"] = cfg.nonuniform.edge_points;
    j["iteration"]["slack_weight"] = cfg.slack_weight;
    j["iteration"]["gamma_start"] = cfg.trust.gamma_start;
    j["iteration"]["gamma_end"] = cfg.trust.gamma_end;
    j["iteration"]["gamma_small"] = cfg.trust.gamma_small;
    j["iteration"]["gamma_ramp"] = cfg.trust.ramp_length;
    j["iteration"]["max_iters"] = cfg.max_iterations;
    j["iteration"]["no_improve_window"] = cfg.no_improve_window;
    j["iteration"]["eps_fine"] = cfg.eps_fine;
    j["iteration"]["b_path"] = cfg.b_path;
    j["solver"]["tol"] = cfg.solver_tol;
    j["solver"]["max_iters"] = cfg.solver_max_iterations;
    j["output"]["dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    return j;
}

}  // namespace

void write_coefficients_csv(const std::string& path, const FilterBank& bank) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    for (int n = 0; n < bank.num_channels(); ++n) {
        for (int l = 0; l < bank.filter_length(); ++l) {
            if (l) os << ",";
            os << format_full(bank(n, l));
        }
        os << "\n";
    }
}

FilterBank read_coefficients_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot read " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && rows.front().size() != row.size())
            throw ShapeMismatch("ragged coefficient csv: " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ShapeMismatch("empty coefficient csv: " + path);
    FilterBank bank(static_cast<int>(rows.size()),
                    static_cast<int>(rows.front().size()));
    for (size_t n = 0; n < rows.size(); ++n)
        for (size_t l = 0; l < rows[n].size(); ++l)
            bank(static_cast<int>(n), static_cast<int>(l)) = rows[n][l];
    return bank;
}

void write_beampattern_csv(const std::string& path, const DesignReport& rep,
                           double sample_rate_hz) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "freq_hz,theta_deg,mag_db,phase_rad,group_delay_samples\n";
    for (int m = 0; m < rep.bp_omegas.size(); ++m) {
        const double freq = rep.bp_omegas[m] * sample_rate_hz / (2.0 * kPi);
        for (int k = 0; k < rep.bp_thetas.size(); ++k) {
            os << format_full(freq) << "," << format_full(rad_to_deg(rep.bp_thetas[k]))
               << "," << format_full(rep.bp_mag_db(m, k)) << ","
               << format_full(rep.bp_phase_rad(m, k)) << ",";
            const double tau = rep.bp_delay_samples(m, k);
            if (std::isnan(tau)) os << "nan";
            else os << format_full(tau);
            os << "\n";
        }
    }
}

void write_wng_csv(const std::string& path, const DesignReport& rep,
                   double sample_rate_hz) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "freq_hz,wng_db\n";
    for (int m = 0; m < rep.wng_omegas.size(); ++m)
        os << format_full(rep.wng_omegas[m] * sample_rate_hz / (2.0 * kPi))
           << "," << format_full(rep.wng_db[m]) << "\n";
}

void write_sigma_tau_csv(const std::string& path, const DesignReport& rep) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "theta_deg,sigma_tau_samples\n";
    for (int k = 0; k < rep.pb_thetas.size(); ++k)
        os << format_full(rad_to_deg(rep.pb_thetas[k])) << ","
           << format_full(rep.sigma_tau_theta[k]) << "\n";
}

void write_trace_csv(const std::string& path, const DesignReport& rep) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "k,path,objective,delta_rlx,delta_norm,sigma_tau_estimate\n";
    for (const IterationRecord& r : rep.trace)
        os << r.k << "," << r.path << "," << format_full(r.objective) << ","
           << format_full(r.delta_rlx) << "," << format_full(r.delta_norm)
           << "," << format_full(r.sigma_tau_estimate) << "\n";
}

void write_report_json(const std::string& path, const RunConfig& cfg,
                       const DesignReport& rep) {
    nlohmann::json j;
    j["config"] = config_echo(cfg);
    j["design"] = rep.design_name;
    j["status"] = status_name(rep.status);
    j["solver"]["message"] = rep.solver_message;
    j["solver"]["iterations"] = rep.solver_iterations;
    j["solver"]["outer_iterations"] = rep.outer_iterations;
    if (!rep.certificate_families.empty()) {
        nlohmann::json fams = nlohmann::json::array();
        for (const auto& f : rep.certificate_families)
            fams.push_back({{"family", family_name(f.first)},
                            {"weight", f.second}});
        j["solver"]["certificate_families"] = fams;
    }
    if (rep.status == SolveStatus::optimal) {
        j["metrics"]["passband_ripple_db"] = rep.passband_ripple_db;
        j["metrics"]["stopband_atten_db"] = rep.stopband_atten_db;
        j["metrics"]["tau_avg_samples"] = rep.tau_avg_samples;
        j["metrics"]["sigma_tau_samples"] = rep.sigma_tau_samples;
        j["metrics"]["j_sol"] = rep.j_sol;
        j["metrics"]["min_wng_db"] = rep.min_wng_db;
        j["metrics"]["delay_guard_skips"] = rep.delay_guard_skips;
    }
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << j.dump(2) << "\n";
}

RunArtifacts run_design_config(const RunConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const std::string dir = cfg.output_dir + "/";
    RunArtifacts art;
    const ArrayGeometry geom = cfg.to_geometry();
    const BandSpec bands = cfg.to_bands();

    SolveStatus status;
    std::string message;
    int iterations = 0, outer = 0;
    std::vector<IterationRecord> trace;
    std::vector<std::pair<Family, double>> cert;
    FilterBank bank;
    DesignFamily family = DesignFamily::convex;

    if (cfg.is_iterative()) {
        family = DesignFamily::iterative;
        const IterativeResult res = run_two_step(cfg.to_iterative_spec());
        status = res.status;
        bank = res.bank;
        outer = res.path_a.iterations + res.path_b.iterations;
        message = res.chosen_path.empty() ? std::string("no usable path")
                                          : "chose path " + res.chosen_path;
        trace = res.path_a.trace;
        trace.insert(trace.end(), res.path_b.trace.begin(),
                     res.path_b.trace.end());
    } else {
        const ConvexDesignSpec spec = cfg.to_convex_spec();
        SolverOptions solver;
        solver.tol = cfg.solver_tol;
        solver.max_iterations = cfg.solver_max_iterations;
        const DesignResult res = cfg.is_competing() ? design_c(spec, solver)
                                                    : design_v1(spec, solver);
        status = res.outcome.status;
        bank = res.bank;
        iterations = res.outcome.iterations;
        message = res.outcome.message;
        cert = res.outcome.certificate_families;
    }

    DesignReport rep;
    if (status == SolveStatus::optimal) {
        MetricsConfig mcfg;
        mcfg.freq_points = cfg.freq_points;
        mcfg.angle_points = cfg.angle_points;
        rep = evaluate(geom, bank, bands, cfg.tau_d(), family, mcfg);
    }
    rep.design_name = design_type_name(cfg.design);
    rep.status = status;
    rep.solver_iterations = iterations;
    rep.outer_iterations = outer;
    rep.solver_message = message;
    rep.trace = std::move(trace);
    rep.certificate_families = std::move(cert);

    if (status == SolveStatus::optimal) {
        write_coefficients_csv(dir + "coefficients.csv", bank);
        write_beampattern_csv(dir + "beampattern.csv", rep,
                              cfg.sample_rate_hz);
        write_wng_csv(dir + "wng.csv", rep, cfg.sample_rate_hz);
        write_sigma_tau_csv(dir + "group_delay_deviation.csv", rep);
        if (cfg.is_iterative()) write_trace_csv(dir + "trace.csv", rep);
    }
    write_report_json(dir + "report.json", cfg, rep);

    art.report = std::move(rep);
    art.bank = std::move(bank);
    switch (status) {
        case SolveStatus::optimal: art.exit_code = 0; break;
        case SolveStatus::infeasible: art.exit_code = 2; break;
        default: art.exit_code = 3; break;
    }
    return art;
}

RunArtifacts evaluate_coefficients(const RunConfig& cfg,
                                   const std::string& coeffs_csv) {
    ensure_dir(cfg.output_dir);
    const std::string dir = cfg.output_dir + "/";
    RunArtifacts art;
    art.bank = read_coefficients_csv(coeffs_csv);
    MetricsConfig mcfg;
    mcfg.freq_points = cfg.freq_points;
    mcfg.angle_points = cfg.angle_points;
    art.report = evaluate(cfg.to_geometry(), art.bank, cfg.to_bands(),
                          cfg.tau_d(),
                          cfg.is_iterative() ? DesignFamily::iterative
                                             : DesignFamily::convex,
                          mcfg);
    art.report.design_name = design_type_name(cfg.design);
    art.report.status = SolveStatus::optimal;
    art.report.solver_message = "evaluation of " + coeffs_csv;
    write_beampattern_csv(dir + "beampattern.csv", art.report,
                          cfg.sample_rate_hz);
    write_wng_csv(dir + "wng.csv", art.report, cfg.sample_rate_hz);
    write_sigma_tau_csv(dir + "group_delay_deviation.csv", art.report);
    write_report_json(dir + "report.json", cfg, art.report);
    art.exit_code = 0;
    return art;
}

}  // namespace bfd
