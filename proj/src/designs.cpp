// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/designs.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "bfdesign/response.hpp"

namespace bfd {

namespace {

struct Layout {
    Parameterization param;
    int n_reduced;
    int n_vars;     // reduced coefficients + epigraph (+ norm bound)
    int t_index;    // passband epigraph variable
    int u_index;    // coefficient-norm bound, -1 when lambda == 0
    bool tie_symmetry_rows = false;      // explicit symmetry equalities
    bool tie_linear_phase_rows = false;  // explicit reversal equalities
};

Layout make_layout(const ConvexDesignSpec& spec) {
    const int n_ch = spec.geometry.num_elements();
    const int len = spec.filter_length;
    Parameterization param = Parameterization::full(n_ch, len);
    bool sym_rows = false, lp_rows = false;
    if (spec.linear_phase) {
        const bool reduced = spec.tying != TyingImpl::equality_rows;
        if (reduced)
            param = Parameterization::linear_phase(spec.geometry, len);
        else
            lp_rows = true;
        if (spec.symmetry && spec.tying == TyingImpl::equality_rows)
            sym_rows = true;
    } else if (spec.symmetry) {
        const bool reduced = spec.tying == TyingImpl::reduced_variables;
        if (reduced)
            param = Parameterization::symmetric(spec.geometry, len);
        else
            sym_rows = true;
    }
    Layout lay{std::move(param), 0, 0, 0, -1, sym_rows, lp_rows};
    lay.n_reduced = lay.param.reduced_size();
    lay.t_index = lay.n_reduced;
    lay.n_vars = lay.n_reduced + 1;
    if (spec.lambda > 0.0) {
        lay.u_index = lay.n_vars;
        ++lay.n_vars;
    }
    return lay;
}

void add_tying_equalities(ConeProgram& prog, const ConvexDesignSpec& spec,
                          const Layout& lay) {
    const int n_ch = spec.geometry.num_elements();
    const int len = spec.filter_length;
    auto add_pair = [&](int a, int b) {
        if (a == b) return;
        Eigen::VectorXd row = Eigen::VectorXd::Zero(lay.n_vars);
        row[a] = 1.0;
        row[b] = -1.0;
        prog.add_equality(row, 0.0);
    };
    if (lay.tie_symmetry_rows)
        for (int n = 0; n < n_ch / 2; ++n)
            for (int l = 0; l < len; ++l)
                add_pair(flat_index(n, l, len), flat_index(n_ch - 1 - n, l, len));
    if (lay.tie_linear_phase_rows)
        for (int n = 0; n < n_ch / 2 + (n_ch % 2); ++n)
            for (int l = 0; l < len; ++l) {
                const int a = flat_index(n, l, len);
                const int b = flat_index(n_ch - 1 - n, len - 1 - l, len);
                if (a < b) add_pair(a, b);
            }
}

// Passband/stopband rows are pre-rotated by e^{j omega tau_d}: this leaves
// every modulus unchanged and turns the linear-phase-reduced rows exactly
// real, which halves them into orthant pairs.
Eigen::VectorXcd rotated_reduced_steering(const ConvexDesignSpec& spec,
                                          const Layout& lay, double omega,
                                          double theta) {
    const Eigen::VectorXcd g =
        steering_vector(spec.geometry, spec.filter_length, omega, theta);
    Eigen::VectorXcd red = lay.param.reduce_row(g);
    const Complex rot(std::cos(omega * spec.tau_d),
                      std::sin(omega * spec.tau_d));
    return rot * red;
}

ConeProgram build_program(const ConvexDesignSpec& spec, DesignKind kind,
                          const Layout& lay, const SampleSet& grid,
                          double* pin_residual_out = nullptr) {
    ConeProgram prog(lay.n_vars);
    prog.objective()[lay.t_index] = 1.0;
    if (lay.u_index >= 0) prog.objective()[lay.u_index] = spec.lambda;

    std::vector<Eigen::VectorXd> pin_rows_store;
    std::vector<double> pin_rhs_store;
    auto* pin_rows = &pin_rows_store;
    auto* pin_rhs = &pin_rhs_store;

    int pb_count = 0, sb_count = 0, wng_count = 0;
    for (const SamplePoint& p : grid.points) {
        if (p.role == SampleRole::passband) ++pb_count;
        else if (p.role == SampleRole::stopband) ++sb_count;
        else ++wng_count;
    }
    const int n_ch = spec.geometry.num_elements();
    prog.reserve_rows(3 * (pb_count + sb_count) + (2 * n_ch + 1) * wng_count +
                      lay.n_reduced + 2);

    Eigen::MatrixXcd row(1, lay.n_reduced);
    Eigen::VectorXcd rhs(1);
    for (const SamplePoint& p : grid.points) {
        switch (p.role) {
            case SampleRole::passband: {
                row.row(0) =
                    rotated_reduced_steering(spec, lay, p.omega, p.theta);
                rhs[0] = Complex(1.0, 0.0);
                add_complex_linf_epigraph(prog, row, rhs, lay.t_index, 0.0, 0,
                                          Family::passband);
                break;
            }
            case SampleRole::stopband: {
                row.row(0) =
                    rotated_reduced_steering(spec, lay, p.omega, p.theta);
                rhs[0] = Complex(0.0, 0.0);
                add_complex_linf_epigraph(prog, row, rhs, -1,
                                          spec.stopband_ceiling, 0,
                                          Family::stopband);
                break;
            }
            case SampleRole::wng_frequency: {
                const Eigen::MatrixXcd a_full =
                    wng_matrix(spec.geometry, spec.filter_length, p.omega);
                Eigen::MatrixXcd a_red(n_ch, lay.n_reduced);
                for (int n = 0; n < n_ch; ++n)
                    a_red.row(n) = lay.param.reduce_row(
                        Eigen::VectorXcd(a_full.row(n).transpose()));
                const Eigen::VectorXcd steer = lay.param.reduce_row(
                    steering_vector(spec.geometry, spec.filter_length, p.omega,
                                    spec.bands.theta_d));
                if (kind == DesignKind::v1) {
                    add_wng_cone(prog, a_red, steer, spec.tau_d, p.omega,
                                 spec.wng_floor, 0);
                } else {
                    // robustness cap ||A x|| <= sqrt(1 / wng_floor); the
                    // pinned steering-direction rows are gathered for
                    // projection below
                    add_l2_cap(prog, a_red, std::sqrt(1.0 / spec.wng_floor), 0,
                               Family::wng);
                    const Complex rot(std::cos(p.omega * spec.tau_d),
                                      std::sin(p.omega * spec.tau_d));
                    const Eigen::VectorXcd rotated = rot * steer;
                    pin_rows->push_back(rotated.real());
                    pin_rhs->push_back(1.0);
                    if (rotated.imag().cwiseAbs().maxCoeff() > 0.0) {
                        pin_rows->push_back(rotated.imag());
                        pin_rhs->push_back(0.0);
                    }
                }
                break;
            }
        }
    }

    if (!pin_rows_store.empty()) {
        // The pinned-response rows can be rank deficient or even inconsistent
        // (the tied coefficient space cannot always represent the target at
        // every frequency). They are replaced by the consistent system on
        // their numerically supported row space; the unavoidable residual is
        // reported to the caller.
        const int p = static_cast<int>(pin_rows_store.size());
        Eigen::MatrixXd E(p, lay.n_reduced);
        Eigen::VectorXd b(p);
        for (int i = 0; i < p; ++i) {
            E.row(i) = pin_rows_store[static_cast<size_t>(i)];
            b[i] = pin_rhs_store[static_cast<size_t>(i)];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(
            E, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sig = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < sig.size(); ++i)
            if (sig[i] > 1e-10 * sig[0]) ++rank;
        Eigen::VectorXd x_fit = Eigen::VectorXd::Zero(lay.n_reduced);
        for (int i = 0; i < rank; ++i) {
            const double coef = svd.matrixU().col(i).dot(b) / sig[i];
            Eigen::VectorXd row = Eigen::VectorXd::Zero(lay.n_vars);
            row.head(lay.n_reduced) = svd.matrixV().col(i);
            prog.add_equality(row, coef);
            x_fit += coef * svd.matrixV().col(i);
        }
        if (pin_residual_out)
            *pin_residual_out = (E * x_fit - b).cwiseAbs().maxCoeff();
    }

    add_tying_equalities(prog, spec, lay);

    if (lay.u_index >= 0) {
        // ||x_full||_2 <= u through the parameterization column norms
        Eigen::VectorXd f = Eigen::VectorXd::Zero(lay.n_vars);
        f[lay.u_index] = 1.0;
        Eigen::MatrixXd F = Eigen::MatrixXd::Zero(lay.n_reduced, lay.n_vars);
        const Eigen::VectorXd weights = lay.param.column_weights();
        for (int j = 0; j < lay.n_reduced; ++j) F(j, j) = weights[j];
        prog.add_soc(f, 0.0, F, Eigen::VectorXd::Zero(lay.n_reduced),
                     Family::regularization);
    }
    return prog;
}

DesignResult run_design(const ConvexDesignSpec& spec, DesignKind kind,
                        const SolverOptions& solver) {
    spec.validate();
    const Layout lay = make_layout(spec);
    const SampleSet grid =
        uniform_grid(spec.bands, spec.grid_freq, spec.grid_angle);
    DesignResult res;
    ConeProgram prog =
        build_program(spec, kind, lay, grid, &res.pinned_row_residual);

    res.cone_rows = prog.num_cone_rows();
    res.equality_rows = prog.num_eq();
    res.outcome = solve(prog, solver);
    if (res.outcome.status != SolveStatus::optimal) {
        res.bank = FilterBank(spec.geometry.num_elements(), spec.filter_length);
        return res;
    }

    res.bank = lay.param.expand_bank(
        res.outcome.primal.head(lay.n_reduced));

    // Re-evaluate the cost and the binding constraints on the design grid.
    const Eigen::VectorXd omegas =
        linspace(spec.bands.omega_lo, spec.bands.omega_hi, spec.grid_freq);
    const Eigen::VectorXd pb_thetas = linspace(
        spec.bands.passband.lo, spec.bands.passband.hi, spec.grid_angle);
    const Eigen::MatrixXcd pb =
        response_grid(spec.geometry, res.bank, omegas, pb_thetas);
    double j = 0.0;
    for (int m = 0; m < omegas.size(); ++m) {
        const Complex bd = std::exp(Complex(0.0, -omegas[m] * spec.tau_d));
        for (int k = 0; k < pb_thetas.size(); ++k)
            j = std::max(j, std::abs(pb(m, k) - bd));
    }
    res.j_sol = j;

    double sb_peak = 0.0;
    if (!spec.bands.stopband.empty()) {
        const std::vector<int> alloc =
            proportional_allocation(spec.bands.stopband, spec.grid_angle);
        for (size_t i = 0; i < spec.bands.stopband.size(); ++i) {
            const Eigen::VectorXd thetas =
                linspace(spec.bands.stopband[i].lo, spec.bands.stopband[i].hi,
                         alloc[i]);
            sb_peak = std::max(
                sb_peak, response_grid(spec.geometry, res.bank, omegas, thetas)
                             .cwiseAbs()
                             .maxCoeff());
        }
    }
    res.stopband_peak = sb_peak;

    double min_wng = std::numeric_limits<double>::infinity();
    for (int m = 0; m < omegas.size(); ++m)
        min_wng = std::min(min_wng, white_noise_gain(spec.geometry, res.bank,
                                                     omegas[m],
                                                     spec.bands.theta_d));
    res.min_constraint_wng = min_wng;
    return res;
}

}  // namespace

void ConvexDesignSpec::validate() const {
    bands.validate();
    std::vector<std::string> bad;
    if (filter_length < 1) bad.push_back("filter_length must be >= 1");
    if (!(stopband_ceiling > 0.0))
        bad.push_back("stopband_ceiling must be > 0");
    if (!(wng_floor > 0.0)) bad.push_back("wng_floor must be > 0");
    if (lambda < 0.0) bad.push_back("lambda must be >= 0");
    if (grid_freq < 2 || grid_angle < 2)
        bad.push_back("grid must have at least 2 points per dimension");
    if (linear_phase) {
        if (!geometry.is_symmetric())
            bad.push_back("linear_phase requires a symmetric geometry");
        const double half = 0.5 * static_cast<double>(filter_length - 1);
        if (std::abs(tau_d - half) > 1e-12)
            bad.push_back("linear_phase requires tau_d = (L-1)/2");
    }
    if (symmetry && !geometry.is_symmetric())
        bad.push_back("symmetry requires a symmetric geometry");
    if (!bad.empty()) {
        std::string msg = "invalid design specification:";
        for (const std::string& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
}

Eigen::VectorXcd build_desired_passband(const SampleSet& grid, double tau_d) {
    std::vector<Complex> vals;
    for (const SamplePoint& p : grid.points)
        if (p.role == SampleRole::passband)
            vals.push_back(std::exp(Complex(0.0, -p.omega * tau_d)));
    Eigen::VectorXcd d(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i)
        d[static_cast<Eigen::Index>(i)] = vals[i];
    return d;
}

DesignResult design_v1(const ConvexDesignSpec& spec,
                       const SolverOptions& solver) {
    return run_design(spec, DesignKind::v1, solver);
}

DesignResult design_c(const ConvexDesignSpec& spec,
                      const SolverOptions& solver) {
    return run_design(spec, DesignKind::c, solver);
}

ConeProgram build_design_program(const ConvexDesignSpec& spec,
                                 DesignKind kind) {
    spec.validate();
    const Layout lay = make_layout(spec);
    const SampleSet grid =
        uniform_grid(spec.bands, spec.grid_freq, spec.grid_angle);
    return build_program(spec, kind, lay, grid);
}

}  // namespace bfd
