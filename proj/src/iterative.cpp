// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/iterative.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bfdesign/response.hpp"
#include "bfdesign/solver.hpp"

namespace bfd {

namespace {

constexpr double kSlackFloor = 1e-8;  // delta_rlx below this means feasible

struct VirtualAxes {
    Eigen::VectorXd omegas;
    Eigen::VectorXd pb_thetas;
    std::vector<Eigen::VectorXd> sb_thetas;  // per stopband interval
    std::vector<int> sb_virtual_counts;
    std::vector<int> sb_actual_counts;
};

VirtualAxes make_axes(const IterativeDesignSpec& spec) {
    VirtualAxes ax;
    ax.omegas = linspace(spec.bands.omega_lo, spec.bands.omega_hi,
                         spec.grid.virtual_freq);
    ax.pb_thetas = linspace(spec.bands.passband.lo, spec.bands.passband.hi,
                            spec.grid.virtual_angle);
    if (!spec.bands.stopband.empty()) {
        ax.sb_virtual_counts = proportional_allocation(
            spec.bands.stopband, spec.grid.virtual_angle);
        ax.sb_actual_counts = proportional_allocation(spec.bands.stopband,
                                                      spec.grid.actual_angle);
        for (size_t i = 0; i < spec.bands.stopband.size(); ++i)
            ax.sb_thetas.push_back(linspace(spec.bands.stopband[i].lo,
                                            spec.bands.stopband[i].hi,
                                            ax.sb_virtual_counts[i]));
    }
    return ax;
}

// Worst-error samples for the current iterate: group-delay and magnitude
// surfaces over the passband, response magnitude over each stopband interval.
void select_samples(const IterativeDesignSpec& spec, const VirtualAxes& ax,
                    const FilterBank& x, IterationState& state) {
    const GridEvaluation pb =
        evaluate_grid(spec.geometry, x, ax.omegas, ax.pb_thetas, true);
    Eigen::MatrixXd gd_surface(pb.response.rows(), pb.response.cols());
    Eigen::MatrixXd mag_surface(pb.response.rows(), pb.response.cols());
    for (int m = 0; m < pb.response.rows(); ++m)
        for (int k = 0; k < pb.response.cols(); ++k) {
            gd_surface(m, k) =
                pb.delay_valid(m, k)
                    ? std::abs(pb.group_delay(m, k) - spec.tau_d)
                    : std::numeric_limits<double>::quiet_NaN();
            mag_surface(m, k) = std::abs(std::norm(pb.response(m, k)) - 1.0);
        }
    state.gd_points = select_nonuniform(gd_surface, ax.omegas, ax.pb_thetas,
                                        spec.grid, SampleRole::passband)
                          .points;
    state.mag_points = select_nonuniform(mag_surface, ax.omegas, ax.pb_thetas,
                                         spec.grid, SampleRole::passband)
                           .points;

    state.sb_points.clear();
    for (size_t i = 0; i < ax.sb_thetas.size(); ++i) {
        const Eigen::MatrixXcd b =
            response_grid(spec.geometry, x, ax.omegas, ax.sb_thetas[i]);
        GridConfig cfg = spec.grid;
        cfg.virtual_angle = ax.sb_virtual_counts[i];
        cfg.actual_angle = ax.sb_actual_counts[i];
        const SampleSet sel =
            select_nonuniform(b.cwiseAbs(), ax.omegas, ax.sb_thetas[i], cfg,
                              SampleRole::stopband);
        state.sb_points.insert(state.sb_points.end(), sel.points.begin(),
                               sel.points.end());
    }
    const int n_wng = spec.wng_freq_count > 0 ? spec.wng_freq_count
                                              : spec.step1_grid_freq;
    state.wng_omegas =
        linspace(spec.bands.omega_lo, spec.bands.omega_hi, n_wng);
}

}  // namespace

void IterativeDesignSpec::validate() const {
    bands.validate();
    grid.validate();
    std::vector<std::string> bad;
    if (filter_length < 1) bad.push_back("filter_length must be >= 1");
    if (!(stopband_ceiling > 0.0)) bad.push_back("stopband_ceiling must be > 0");
    if (!(wng_floor > 0.0)) bad.push_back("wng_floor must be > 0");
    if (lambda < 0.0) bad.push_back("lambda must be >= 0");
    if (!(slack_weight > 0.0)) bad.push_back("slack_weight must be > 0");
    if (max_iterations < 1) bad.push_back("max_iterations must be >= 1");
    if (no_improve_window < 1) bad.push_back("no_improve_window must be >= 1");
    if (!(trust.gamma_start >= trust.gamma_end &&
          trust.gamma_end >= trust.gamma_small && trust.gamma_small > 0.0))
        bad.push_back("trust schedule must be nonincreasing and positive");
    if (!bands.stopband.empty()) {
        const std::vector<int> alloc =
            proportional_allocation(bands.stopband, grid.actual_angle);
        for (int a : alloc)
            if (grid.edge_points > 0 && a <= 2 * grid.edge_points)
                bad.push_back(
                    "stopband interval receives too few angle blocks for the "
                    "edge strips");
    }
    if (!bad.empty()) {
        std::string msg = "invalid iterative design specification:";
        for (const std::string& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
}

LinearizedBlocks linearize(const ArrayGeometry& geom, const FilterBank& x,
                           const std::vector<SamplePoint>& gd_points,
                           const std::vector<SamplePoint>& mag_points,
                           const Eigen::VectorXd& wng_omegas, double tau_d,
                           double theta_d, double wng_floor) {
    const int nx = x.size();
    LinearizedBlocks blocks;

    std::vector<Eigen::VectorXd> rows;
    std::vector<double> vals;
    rows.reserve(gd_points.size());
    for (const SamplePoint& p : gd_points) {
        try {
            const double tau = group_delay(geom, x, p.omega, p.theta);
            rows.push_back(group_delay_gradient(geom, x, p.omega, p.theta));
            vals.push_back(tau - tau_d);
        } catch (const NearZeroResponse&) {
            ++blocks.replaced_points;  // surface selection already avoided
                                       // every usable point in this block
        }
    }
    blocks.gd_rows.resize(static_cast<Eigen::Index>(rows.size()), nx);
    blocks.gd_vals.resize(static_cast<Eigen::Index>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        blocks.gd_rows.row(static_cast<Eigen::Index>(i)) = rows[i];
        blocks.gd_vals[static_cast<Eigen::Index>(i)] = vals[i];
    }

    blocks.mag_rows.resize(static_cast<Eigen::Index>(mag_points.size()), nx);
    blocks.mag_vals.resize(static_cast<Eigen::Index>(mag_points.size()));
    for (size_t i = 0; i < mag_points.size(); ++i) {
        const ValueGradient vg = magsq_error_gradient(
            geom, x, mag_points[i].omega, mag_points[i].theta, 1.0);
        blocks.mag_rows.row(static_cast<Eigen::Index>(i)) = vg.gradient;
        blocks.mag_vals[static_cast<Eigen::Index>(i)] = vg.value;
    }

    blocks.wng_rows.resize(wng_omegas.size(), nx);
    blocks.wng_vals.resize(wng_omegas.size());
    for (int m = 0; m < wng_omegas.size(); ++m) {
        const ValueGradient vg =
            wng_error_gradient(geom, x, wng_omegas[m], theta_d, wng_floor);
        blocks.wng_rows.row(m) = vg.gradient;
        blocks.wng_vals[m] = vg.value;
    }
    return blocks;
}

double compute_gamma_pb(const ArrayGeometry& geom, const FilterBank& x_sol1,
                        const BandSpec& bands, int grid_freq, int grid_angle,
                        double eps_fine) {
    const Eigen::VectorXd omegas =
        linspace(bands.omega_lo, bands.omega_hi, grid_freq);
    const Eigen::VectorXd thetas =
        linspace(bands.passband.lo, bands.passband.hi, grid_angle);
    const Eigen::MatrixXcd b = response_grid(geom, x_sol1, omegas, thetas);
    double worst = 0.0;
    for (int m = 0; m < b.rows(); ++m)
        for (int k = 0; k < b.cols(); ++k)
            worst = std::max(worst, std::abs(std::norm(b(m, k)) - 1.0));
    return worst + eps_fine;
}

namespace {

ConeProgram build_iteration_program(const IterationState& state,
                                    const IterativeDesignSpec& spec,
                                    double gamma_pb, double gamma_delta) {
    const int nx = state.x.size();
    const int rlx = nx;
    const int t = nx + 1;
    ConeProgram prog(nx + 2);
    prog.objective()[t] = 1.0;
    prog.objective()[rlx] = spec.slack_weight;

    const int n_gd = static_cast<int>(state.blocks.gd_vals.size());
    const int n_mag = static_cast<int>(state.blocks.mag_vals.size());
    const int n_wng = static_cast<int>(state.blocks.wng_vals.size());
    prog.reserve_rows(2 * n_gd + 2 * n_mag + n_wng +
                      3 * static_cast<int>(state.sb_points.size()) + nx + 4);

    // Rows are normalized to ~unit gradient norm (the epigraph/slack columns
    // scale along, so each constraint is unchanged); gradient magnitudes vary
    // over orders of magnitude and unbalanced rows stall the dual residual.
    Eigen::VectorXd row = Eigen::VectorXd::Zero(nx + 2);
    for (int i = 0; i < n_gd; ++i) {
        const double sc =
            1.0 / std::max(1.0, state.blocks.gd_rows.row(i).norm());
        row.setZero();
        row.head(nx) = sc * state.blocks.gd_rows.row(i);
        row[t] = -sc;
        prog.add_linear_le(row, -sc * state.blocks.gd_vals[i],
                           Family::group_delay);
        row.head(nx) = -sc * state.blocks.gd_rows.row(i);
        prog.add_linear_le(row, sc * state.blocks.gd_vals[i],
                           Family::group_delay);
    }
    for (int i = 0; i < n_mag; ++i) {
        const double sc =
            1.0 / std::max(1.0, state.blocks.mag_rows.row(i).norm());
        row.setZero();
        row.head(nx) = sc * state.blocks.mag_rows.row(i);
        row[rlx] = -sc;
        prog.add_linear_le(row, sc * (gamma_pb - state.blocks.mag_vals[i]),
                           Family::magnitude);
        row.head(nx) = -sc * state.blocks.mag_rows.row(i);
        prog.add_linear_le(row, sc * (gamma_pb + state.blocks.mag_vals[i]),
                           Family::magnitude);
    }
    for (int i = 0; i < n_wng; ++i) {
        const double sc =
            1.0 / std::max(1.0, state.blocks.wng_rows.row(i).norm());
        row.setZero();
        row.head(nx) = -sc * state.blocks.wng_rows.row(i);
        row[rlx] = -sc;
        prog.add_linear_le(row, sc * state.blocks.wng_vals[i], Family::wng);
    }

    // stopband: |u^T (x_k + delta)| <= ceiling + delta_rlx
    const Eigen::VectorXcd x_flat = state.x.flatten().cast<Complex>();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(nx + 2);
    f[rlx] = 1.0;
    for (const SamplePoint& p : state.sb_points) {
        const Eigen::VectorXcd u = steering_vector(
            spec.geometry, spec.filter_length, p.omega, p.theta);
        const Complex at_x = (u.transpose() * x_flat)(0);
        Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2, nx + 2);
        F.row(0).head(nx) = u.real();
        F.row(1).head(nx) = u.imag();
        Eigen::VectorXd g(2);
        g << at_x.real(), at_x.imag();
        prog.add_soc(f, spec.stopband_ceiling, F, g, Family::stopband);
    }

    // trust region ||delta||_2 <= gamma + delta_rlx
    {
        Eigen::MatrixXd F = Eigen::MatrixXd::Zero(nx, nx + 2);
        F.block(0, 0, nx, nx) = Eigen::MatrixXd::Identity(nx, nx);
        prog.add_soc(f, gamma_delta, F, Eigen::VectorXd::Zero(nx),
                     Family::trust_region);
    }
    // delta_rlx >= 0
    row.setZero();
    row[rlx] = -1.0;
    prog.add_linear_le(row, 0.0, Family::slack);

    if (spec.symmetric_iterates) {
        const int n_ch = spec.geometry.num_elements();
        const int len = spec.filter_length;
        for (int n = 0; n < n_ch / 2; ++n)
            for (int l = 0; l < len; ++l) {
                Eigen::VectorXd eq = Eigen::VectorXd::Zero(nx + 2);
                eq[flat_index(n, l, len)] = 1.0;
                eq[flat_index(n_ch - 1 - n, l, len)] = -1.0;
                prog.add_equality(eq, state.x(n_ch - 1 - n, l) - state.x(n, l));
            }
    }
    return prog;
}

}  // namespace

void iterate_step(IterationState& state, const IterativeDesignSpec& spec,
                  double gamma_pb, const std::string& dump_path) {
    double gamma_delta = spec.trust.at(state.k);
    SolveOutcome out;
    for (int attempt = 0; attempt < 2; ++attempt) {
        ConeProgram prog =
            build_iteration_program(state, spec, gamma_pb, gamma_delta);
        state.cone_rows = prog.num_cone_rows();
        out = solve(prog, spec.solver);
        if (out.status == SolveStatus::optimal) break;
        if (attempt == 1) {
            if (!dump_path.empty()) {
                std::ofstream os(dump_path);
                prog.dump(os);
            }
            std::ostringstream msg;
            msg << "iteration " << state.k
                << ": conic solve failed twice (" << out.message
                << "; pres=" << out.primal_residual
                << " dres=" << out.dual_residual << " gap=" << out.gap
                << "); trust radius " << gamma_delta;
            if (!dump_path.empty()) msg << "; program dumped to " << dump_path;
            throw SolverFailure(msg.str());
        }
        gamma_delta *= 0.5;  // retry once with a tighter step
    }

    const int nx = state.x.size();
    const Eigen::VectorXd delta = out.primal.head(nx);
    state.delta_rlx = std::max(0.0, out.primal[nx]);
    state.delta_norm = delta.norm();
    state.gd_objective =
        state.blocks.gd_vals.size() > 0
            ? (state.blocks.gd_rows * delta + state.blocks.gd_vals)
                  .cwiseAbs()
                  .maxCoeff()
            : 0.0;
    state.objective = state.gd_objective + spec.slack_weight * state.delta_rlx;

    FilterBank next(state.x.num_channels(), state.x.filter_length());
    next.coeffs() = state.x.coeffs();
    for (int n = 0; n < next.num_channels(); ++n)
        for (int l = 0; l < next.filter_length(); ++l)
            next(n, l) += delta[flat_index(n, l, next.filter_length())];
    state.x = std::move(next);

    const bool slack_now = state.delta_rlx >= kSlackFloor;
    if (state.slack_phase && !slack_now)
        state.monitored.clear();  // feasibility restored; restart the window
    state.slack_phase = slack_now;
    state.monitored.push_back(slack_now ? state.objective : state.gd_objective);
    state.k += 1;
}

namespace {

// Exact constraint check of a candidate iterate over the full virtual grid;
// delta_rlx == 0 certifies only the linearized model at the selected samples,
// and early steps with a wide trust radius carry real linearization error.
bool candidate_feasible(const IterativeDesignSpec& spec, const VirtualAxes& ax,
                        const IterationState& state, double gamma_pb) {
    const double tol = 1e-4;
    for (int m = 0; m < state.wng_omegas.size(); ++m) {
        const double wng = white_noise_gain(spec.geometry, state.x,
                                            state.wng_omegas[m],
                                            spec.bands.theta_d);
        if (wng < spec.wng_floor * (1.0 - tol)) return false;
    }
    for (const Eigen::VectorXd& sth : ax.sb_thetas) {
        const double peak =
            response_grid(spec.geometry, state.x, ax.omegas, sth)
                .cwiseAbs()
                .maxCoeff();
        if (peak > spec.stopband_ceiling * (1.0 + tol)) return false;
    }
    const Eigen::MatrixXcd pb =
        response_grid(spec.geometry, state.x, ax.omegas, ax.pb_thetas);
    for (int m = 0; m < pb.rows(); ++m)
        for (int k = 0; k < pb.cols(); ++k)
            if (std::abs(std::norm(pb(m, k)) - 1.0) > gamma_pb * (1.0 + tol))
                return false;
    return true;
}

double sigma_tau_at_points(const ArrayGeometry& geom, const FilterBank& x,
                           const std::vector<SamplePoint>& points) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const SamplePoint& p : points) {
        try {
            const double tau = group_delay(geom, x, p.omega, p.theta);
            lo = std::min(lo, tau);
            hi = std::max(hi, tau);
        } catch (const NearZeroResponse&) {
        }
    }
    return hi > lo ? hi - lo : 0.0;
}

double sigma_tau_dense(const IterativeDesignSpec& spec, const FilterBank& x) {
    const Eigen::VectorXd omegas = linspace(
        spec.bands.omega_lo, spec.bands.omega_hi, spec.step1_grid_freq);
    const Eigen::VectorXd thetas =
        linspace(spec.bands.passband.lo, spec.bands.passband.hi,
                 spec.step1_grid_angle);
    const GridEvaluation ev = evaluate_grid(spec.geometry, x, omegas, thetas);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < ev.group_delay.rows(); ++m)
        for (int k = 0; k < ev.group_delay.cols(); ++k)
            if (ev.delay_valid(m, k)) {
                lo = std::min(lo, ev.group_delay(m, k));
                hi = std::max(hi, ev.group_delay(m, k));
            }
    return hi > lo ? hi - lo : 0.0;
}

bool no_improvement(const std::vector<double>& monitored, int window) {
    if (static_cast<int>(monitored.size()) <= window) return false;
    double head_min = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + static_cast<size_t>(window) < monitored.size(); ++i)
        head_min = std::min(head_min, monitored[i]);
    for (size_t i = monitored.size() - static_cast<size_t>(window);
         i < monitored.size(); ++i)
        if (monitored[i] < head_min) return false;
    return true;
}

IterativePathResult run_path(const IterativeDesignSpec& spec, double lambda,
                             const std::string& label) {
    IterativePathResult path;
    path.ran = true;
    path.label = label;

    ConvexDesignSpec s1{spec.geometry};
    s1.bands = spec.bands;
    s1.filter_length = spec.filter_length;
    s1.stopband_ceiling = spec.stopband_ceiling;
    s1.wng_floor = spec.wng_floor;
    s1.tau_d = spec.tau_d;
    s1.lambda = lambda;
    s1.grid_freq = spec.step1_grid_freq;
    s1.grid_angle = spec.step1_grid_angle;
    const DesignResult d1 = design_v1(s1, spec.solver);
    path.step1_status = d1.outcome.status;
    if (d1.outcome.status != SolveStatus::optimal) return path;

    // The budget is the step-1 solution's worst passband deviation; take the
    // denser of the step-1 and virtual grids so later audits are consistent.
    path.gamma_pb =
        std::max(compute_gamma_pb(spec.geometry, d1.bank, spec.bands,
                                  spec.step1_grid_freq, spec.step1_grid_angle,
                                  0.0),
                 compute_gamma_pb(spec.geometry, d1.bank, spec.bands,
                                  spec.grid.virtual_freq,
                                  spec.grid.virtual_angle, 0.0)) +
        spec.eps_fine;

    const VirtualAxes ax = make_axes(spec);
    IterationState state;
    state.x = d1.bank;
    state.k = 1;
    FilterBank best_x = d1.bank;
    double best_candidate_objective = std::numeric_limits<double>::infinity();
    bool has_feasible_iterate = false;

    while (state.k <= spec.max_iterations) {
        select_samples(spec, ax, state.x, state);
        state.blocks = linearize(spec.geometry, state.x, state.gd_points,
                                 state.mag_points, state.wng_omegas,
                                 spec.tau_d, spec.bands.theta_d,
                                 spec.wng_floor);
        try {
            iterate_step(state, spec, path.gamma_pb);
        } catch (const SolverFailure& e) {
            path.label = label + ": " + e.what();
            break;
        }

        IterationRecord rec;
        rec.k = state.k - 1;
        rec.objective = state.objective;
        rec.delta_rlx = state.delta_rlx;
        rec.delta_norm = state.delta_norm;
        rec.sigma_tau_estimate =
            sigma_tau_at_points(spec.geometry, state.x, state.gd_points);
        rec.path = label;
        path.trace.push_back(rec);

        path.best_objective = std::min(path.best_objective, state.gd_objective);
        if (state.delta_rlx < kSlackFloor &&
            state.gd_objective <= best_candidate_objective &&
            candidate_feasible(spec, ax, state, path.gamma_pb)) {
            best_candidate_objective = state.gd_objective;
            best_x = state.x;
            has_feasible_iterate = true;
        }
        if (no_improvement(state.monitored, spec.no_improve_window)) break;
    }
    path.iterations = state.k - 1;
    path.bank = has_feasible_iterate ? best_x : state.x;
    path.audited = has_feasible_iterate;
    path.sigma_tau = sigma_tau_dense(spec, path.bank);
    return path;
}

}  // namespace

IterativeResult run_two_step(const IterativeDesignSpec& spec) {
    spec.validate();
    IterativeResult res;

    try {
        res.path_a = run_path(spec, spec.lambda, "A");
    } catch (const SolverFailure& e) {
        res.path_a.ran = true;
        res.path_a.label = std::string("A: ") + e.what();
    }
    if (spec.b_path) {
        try {
            res.path_b = run_path(spec, 0.0, "B");
        } catch (const SolverFailure& e) {
            res.path_b.ran = true;
            res.path_b.label = std::string("B: ") + e.what();
        }
    }

    const bool a_ok = res.path_a.ran && res.path_a.bank.size() > 0 &&
                      res.path_a.step1_status == SolveStatus::optimal;
    const bool b_ok = res.path_b.ran && res.path_b.bank.size() > 0 &&
                      res.path_b.step1_status == SolveStatus::optimal;
    if (!a_ok && !b_ok) {
        const bool infeasible =
            res.path_a.step1_status == SolveStatus::infeasible &&
            (!spec.b_path ||
             res.path_b.step1_status == SolveStatus::infeasible);
        res.status = infeasible ? SolveStatus::infeasible
                                : SolveStatus::numerical_failure;
        return res;
    }

    const IterativePathResult* chosen = nullptr;
    if (a_ok && b_ok) {
        if (res.path_a.audited != res.path_b.audited) {
            chosen = res.path_a.audited ? &res.path_a : &res.path_b;
        } else {
            // prefer the regularized start on ties
            chosen = (res.path_b.sigma_tau < res.path_a.sigma_tau - 1e-6)
                         ? &res.path_b
                         : &res.path_a;
        }
    } else {
        chosen = a_ok ? &res.path_a : &res.path_b;
    }
    res.bank = chosen->bank;
    res.chosen_path = chosen->label;
    res.gamma_pb = chosen->gamma_pb;
    res.status = SolveStatus::optimal;
    res.j_sol = compute_gamma_pb(spec.geometry, res.bank, spec.bands,
                                 spec.step1_grid_freq, spec.step1_grid_angle,
                                 0.0);

    // Dense verification on a grid 5x finer than the design grid.
    {
        const int vf = 5 * spec.step1_grid_freq;
        const int va = 5 * spec.step1_grid_angle;
        res.verify_mag_error = compute_gamma_pb(spec.geometry, res.bank,
                                                spec.bands, vf, va, 0.0);
        const Eigen::VectorXd omegas =
            linspace(spec.bands.omega_lo, spec.bands.omega_hi, vf);
        double sb_peak = 0.0;
        if (!spec.bands.stopband.empty()) {
            const std::vector<int> alloc =
                proportional_allocation(spec.bands.stopband, va);
            for (size_t i = 0; i < spec.bands.stopband.size(); ++i) {
                const Eigen::VectorXd thetas =
                    linspace(spec.bands.stopband[i].lo,
                             spec.bands.stopband[i].hi, alloc[i]);
                sb_peak = std::max(sb_peak,
                                   response_grid(spec.geometry, res.bank,
                                                 omegas, thetas)
                                       .cwiseAbs()
                                       .maxCoeff());
            }
        }
        res.verify_sb_peak = sb_peak;
        double min_wng = std::numeric_limits<double>::infinity();
        for (int m = 0; m < omegas.size(); ++m)
            min_wng = std::min(min_wng,
                               white_noise_gain(spec.geometry, res.bank,
                                                omegas[m], spec.bands.theta_d));
        res.verify_min_wng = min_wng;
        res.verified = true;
    }

    // Row-count bookkeeping: one nonuniform iteration versus the same
    // formulation written on the full virtual grid.
    {
        const IterativePathResult* p = a_ok ? &res.path_a : &res.path_b;
        (void)p;
        const int nx = spec.geometry.num_elements() * spec.filter_length;
        IterationState probe;
        probe.x = res.bank;
        probe.k = spec.max_iterations;  // schedule tail
        const VirtualAxes ax = make_axes(spec);
        select_samples(spec, ax, probe.x, probe);
        probe.blocks = linearize(spec.geometry, probe.x, probe.gd_points,
                                 probe.mag_points, probe.wng_omegas,
                                 spec.tau_d, spec.bands.theta_d,
                                 spec.wng_floor);
        ConeProgram prog = build_iteration_program(
            probe, spec, res.gamma_pb, spec.trust.gamma_small);
        res.iter_cone_rows = prog.num_cone_rows();
        const int pq = spec.grid.virtual_freq * spec.grid.virtual_angle;
        int sb_total = 0;
        for (int c : ax.sb_virtual_counts) sb_total += spec.grid.virtual_freq * c;
        res.full_grid_cone_rows =
            2 * pq + 2 * pq + 3 * sb_total + spec.grid.virtual_freq +
            (nx + 1) + 1;
    }
    return res;
}

}  // namespace bfd
