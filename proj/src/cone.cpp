// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/cone.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>

namespace bfd {



const char* family_name(Family f) {
    switch (f) {
        case Family::objective: return "objective";
        case Family::passband: return "passband";
        case Family::stopband: return "stopband";
        case Family::wng: return "wng";
        case Family::magnitude: return "magnitude";
        case Family::group_delay: return "group-delay";
        case Family::trust_region: return "trust-region";
        case Family::slack: return "slack";
        case Family::regularization: return "regularization";
        case Family::equality: return "equality";
        case Family::other: return "other";
    }
    return "unknown";
}

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::max_iterations: return "max-iterations";
        case SolveStatus::numerical_failure: return "numerical-failure";
    }
    return "unknown";
}

ConeProgram::ConeProgram(int num_vars)
    : num_vars_(num_vars), objective_(Eigen::VectorXd::Zero(num_vars)) {
    if (num_vars < 1) throw DimensionMismatch("ConeProgram: need >= 1 variable");
}

void ConeProgram::reserve_rows(int rows) {
    g_data_.reserve(static_cast<size_t>(rows) * static_cast<size_t>(num_vars_));
    h_.reserve(static_cast<size_t>(rows));
}

double* ConeProgram::new_rows(int count, Family fam, BlockKind kind) {
    const int offset = num_cone_rows();
    g_data_.resize(g_data_.size() +
                   static_cast<size_t>(count) * static_cast<size_t>(num_vars_),
                   0.0);
    h_.resize(h_.size() + static_cast<size_t>(count), 0.0);
    if (kind == BlockKind::orthant && !blocks_.empty() &&
        blocks_.back().kind == BlockKind::orthant &&
        blocks_.back().family == fam) {
        blocks_.back().dim += count;  // merge consecutive orthant runs
    } else {
        blocks_.push_back({kind, offset, count, fam});
    }
    return g_data_.data() + static_cast<size_t>(offset) * num_vars_;
}

void ConeProgram::add_equality(const Eigen::VectorXd& row, double rhs) {
    if (row.size() != num_vars_)
        throw DimensionMismatch("add_equality: row length mismatch");
    eq_data_.insert(eq_data_.end(), row.data(), row.data() + row.size());
    eq_rhs_.push_back(rhs);
}

void ConeProgram::add_linear_le(const Eigen::VectorXd& a, double b, Family fam) {
    if (a.size() != num_vars_)
        throw DimensionMismatch("add_linear_le: row length mismatch");
    double* g = new_rows(1, fam, BlockKind::orthant);
    for (int j = 0; j < num_vars_; ++j) g[j] = a[j];
    h_[h_.size() - 1] = b;
}

void ConeProgram::add_soc(const Eigen::VectorXd& f, double d,
                          const Eigen::MatrixXd& F, const Eigen::VectorXd& g,
                          Family fam) {
    if (f.size() != num_vars_ || F.cols() != num_vars_ || F.rows() != g.size())
        throw DimensionMismatch("add_soc: shape mismatch");
    if (F.rows() < 1) throw DimensionMismatch("add_soc: empty cone");
    const int dim = static_cast<int>(F.rows()) + 1;
    double* rows = new_rows(dim, fam, BlockKind::soc);
    const size_t base_h = h_.size() - static_cast<size_t>(dim);
    for (int j = 0; j < num_vars_; ++j) rows[j] = -f[j];
    h_[base_h] = d;
    for (int r = 0; r < F.rows(); ++r) {
        double* row = rows + static_cast<size_t>(r + 1) * num_vars_;
        for (int j = 0; j < num_vars_; ++j) row[j] = -F(r, j);
        h_[base_h + static_cast<size_t>(r) + 1] = g[r];
    }
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>>
ConeProgram::cone_matrix() const {
    return {g_data_.data(), num_cone_rows(), num_vars_};
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>>
ConeProgram::eq_matrix() const {
    return {eq_data_.data(), num_eq(), num_vars_};
}

Eigen::Map<const Eigen::VectorXd> ConeProgram::eq_rhs() const {
    return {eq_rhs_.data(), static_cast<Eigen::Index>(eq_rhs_.size())};
}

Eigen::Map<const Eigen::VectorXd> ConeProgram::h_vector() const {
    return {h_.data(), static_cast<Eigen::Index>(h_.size())};
}

ConeProgram::FeasibilityReport ConeProgram::check_feasibility(
    const Eigen::VectorXd& z) const {
    if (z.size() != num_vars_)
        throw DimensionMismatch("check_feasibility: variable count mismatch");
    FeasibilityReport rep;
    std::vector<std::pair<Family, double>> worst;
    auto record = [&](Family fam, double viol) {
        for (auto& w : worst)
            if (w.first == fam) {
                w.second = std::max(w.second, viol);
                return;
            }
        worst.emplace_back(fam, viol);
    };

    if (num_eq() > 0) {
        Eigen::VectorXd r = eq_matrix() * z - eq_rhs();
        rep.max_eq_violation = r.cwiseAbs().maxCoeff();
        record(Family::equality, rep.max_eq_violation);
    }
    const auto g = cone_matrix();
    const auto hh = h_vector();
    Eigen::VectorXd s = hh - g * z;
    for (const Block& blk : blocks_) {
        double viol = 0.0;
        if (blk.kind == BlockKind::orthant) {
            for (int i = 0; i < blk.dim; ++i)
                viol = std::max(viol, -s[blk.offset + i]);
        } else {
            const double s0 = s[blk.offset];
            const double tail = s.segment(blk.offset + 1, blk.dim - 1).norm();
            viol = std::max(viol, tail - s0);
        }
        rep.max_cone_violation = std::max(rep.max_cone_violation, viol);
        record(blk.family, viol);
    }
    std::sort(worst.begin(), worst.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    rep.family_violation = std::move(worst);
    return rep;
}

void ConeProgram::dump(std::ostream& os) const {
    os << "# conic program dump: sections vars/obj/eq/eqrhs/block/g/h;\n";
    os << "# g lines are one per nonzero: block-id row-in-block col value\n";
    os << "vars " << num_vars_ << "\n";
    for (int j = 0; j < num_vars_; ++j)
        if (objective_[j] != 0.0)
            os << "obj " << j << " " << objective_[j] << "\n";
    const auto e = eq_matrix();
    for (int r = 0; r < num_eq(); ++r) {
        for (int j = 0; j < num_vars_; ++j)
            if (e(r, j) != 0.0) os << "eq " << r << " " << j << " " << e(r, j)
                               << "\n";
        os << "eqrhs " << r << " " << eq_rhs_[static_cast<size_t>(r)] << "\n";
    }
    const auto g = cone_matrix();
    for (size_t bi = 0; bi < blocks_.size(); ++bi) {
        const Block& blk = blocks_[bi];
        os << "block " << bi << " "
           << (blk.kind == BlockKind::orthant ? "orthant" : "soc") << " "
           << blk.dim << " " << family_name(blk.family) << "\n";
    }
    for (size_t bi = 0; bi < blocks_.size(); ++bi) {
        const Block& blk = blocks_[bi];
        for (int r = 0; r < blk.dim; ++r) {
            for (int j = 0; j < num_vars_; ++j) {
                const double v = g(blk.offset + r, j);
                if (v != 0.0)
                    os << "g " << bi << " " << r << " " << j << " " << v << "\n";
            }
            const double hv = h_[static_cast<size_t>(blk.offset + r)];
            if (hv != 0.0) os << "h " << bi << " " << r << " " << hv << "\n";
        }
    }
}

void add_complex_linf_epigraph(ConeProgram& prog, const Eigen::MatrixXcd& rows,
                               const Eigen::VectorXcd& rhs, int bound_var,
                               double bound_const, int x_cols_start,
                               Family fam) {
    if (rows.rows() < 1) throw DimensionMismatch("linf epigraph: no rows");
    if (rows.rows() != rhs.size())
        throw DimensionMismatch("linf epigraph: rhs length mismatch");
    if (x_cols_start < 0 ||
        x_cols_start + static_cast<int>(rows.cols()) > prog.num_vars())
        throw DimensionMismatch("linf epigraph: column range out of bounds");
    const int n = prog.num_vars();
    const int w = static_cast<int>(rows.cols());

    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        const bool is_real = rows.row(i).imag().cwiseAbs().maxCoeff() == 0.0 &&
                             rhs[i].imag() == 0.0;
        if (is_real) {
            // |u^T x - d| <= bound as two half-planes.
            Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
            a.segment(x_cols_start, w) = rows.row(i).real();
            if (bound_var >= 0) a[bound_var] = -1.0;
            prog.add_linear_le(a, rhs[i].real() + bound_const, fam);
            a.segment(x_cols_start, w) = -rows.row(i).real();
            prog.add_linear_le(a, bound_const - rhs[i].real(), fam);
        } else {
            Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
            if (bound_var >= 0) f[bound_var] = 1.0;
            Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2, n);
            F.row(0).segment(x_cols_start, w) = rows.row(i).real();
            F.row(1).segment(x_cols_start, w) = rows.row(i).imag();
            Eigen::VectorXd g(2);
            g << -rhs[i].real(), -rhs[i].imag();
            prog.add_soc(f, bound_const, F, g, fam);
        }
    }
}

void add_wng_cone(ConeProgram& prog, const Eigen::MatrixXcd& a_omega,
                  const Eigen::VectorXcd& steer_row, double tau_d, double omega,
                  double floor, int x_cols_start) {
    if (!(floor > 0.0))
        throw NonpositiveFloor("add_wng_cone: floor must be > 0");
    if (a_omega.cols() != steer_row.size())
        throw DimensionMismatch("add_wng_cone: A/steering width mismatch");
    const int n = prog.num_vars();
    const int w = static_cast<int>(a_omega.cols());
    const int n_ch = static_cast<int>(a_omega.rows());
    if (x_cols_start < 0 || x_cols_start + w > n)
        throw DimensionMismatch("add_wng_cone: column range out of bounds");

    const Complex rot(std::cos(omega * tau_d), std::sin(omega * tau_d));
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    f.segment(x_cols_start, w) = (rot * steer_row).real();

    const double root = std::sqrt(floor);
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2 * n_ch, n);
    F.block(0, x_cols_start, n_ch, w) = root * a_omega.real();
    F.block(n_ch, x_cols_start, n_ch, w) = root * a_omega.imag();
    prog.add_soc(f, 0.0, F, Eigen::VectorXd::Zero(2 * n_ch), Family::wng);
}

void add_l2_cap(ConeProgram& prog, const Eigen::MatrixXcd& a_omega, double cap,
                int x_cols_start, Family fam) {
    const int n = prog.num_vars();
    const int w = static_cast<int>(a_omega.cols());
    const int n_ch = static_cast<int>(a_omega.rows());
    if (x_cols_start < 0 || x_cols_start + w > n)
        throw DimensionMismatch("add_l2_cap: column range out of bounds");
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2 * n_ch, n);
    F.block(0, x_cols_start, n_ch, w) = a_omega.real();
    F.block(n_ch, x_cols_start, n_ch, w) = a_omega.imag();
    prog.add_soc(Eigen::VectorXd::Zero(n), cap, F,
                 Eigen::VectorXd::Zero(2 * n_ch), fam);
}

}  // namespace bfd
