// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "bfdesign/errors.hpp"

namespace bfd {

using Complex = std::complex<double>;

// Constraint family tags, used for infeasibility reporting and program dumps.
enum class Family {
    objective,
    passband,
    stopband,
    wng,
    magnitude,
    group_delay,
    trust_region,
    slack,
    regularization,
    equality,
    other,
};
const char* family_name(Family f);

enum class BlockKind { orthant, soc };

// Solver-agnostic conic program over a real variable vector z:
//   minimize    c^T z
//   subject to  E z = b
//               s = h - G z,  s in K
// where K is a product of nonnegative-orthant rows and second-order cones
// {(s0, sbar) : ||sbar||_2 <= s0}. Rows are stored dense (the variable count
// is small in this problem family).
class ConeProgram {
public:
    explicit ConeProgram(int num_vars);

    int num_vars() const { return num_vars_; }
    int num_eq() const { return static_cast<int>(eq_rhs_.size()); }
    int num_cone_rows() const { return static_cast<int>(h_.size()); }

    Eigen::VectorXd& objective() { return objective_; }
    const Eigen::VectorXd& objective() const { return objective_; }

    void reserve_rows(int rows);

    void add_equality(const Eigen::VectorXd& row, double rhs);
    // a^T z <= b
    void add_linear_le(const Eigen::VectorXd& a, double b, Family fam);
    // ||F z + g||_2 <= f^T z + d   (pass a zero `f` for a constant bound)
    void add_soc(const Eigen::VectorXd& f, double d, const Eigen::MatrixXd& F,
                 const Eigen::VectorXd& g, Family fam);

    struct Block {
        BlockKind kind;
        int offset;
        int dim;
        Family family;
    };
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<double>& h() const { return h_; }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
    cone_matrix() const;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
    eq_matrix() const;
    Eigen::Map<const Eigen::VectorXd> eq_rhs() const;
    Eigen::Map<const Eigen::VectorXd> h_vector() const;

    struct FeasibilityReport {
        double max_eq_violation = 0.0;
        double max_cone_violation = 0.0;  // positive means violated
        std::vector<std::pair<Family, double>> family_violation;
        bool feasible(double tol) const {
            return max_eq_violation <= tol && max_cone_violation <= tol;
        }
    };
    FeasibilityReport check_feasibility(const Eigen::VectorXd& z) const;

    // Plain-text sparse dump; format documented in the README.
    void dump(std::ostream& os) const;

private:
    double* new_rows(int count, Family fam, BlockKind kind);

    int num_vars_;
    Eigen::VectorXd objective_;
    std::vector<double> eq_data_;  // row-major
    std::vector<double> eq_rhs_;
    std::vector<double> g_data_;  // row-major
    std::vector<double> h_;
    std::vector<Block> blocks_;
};

enum class SolveStatus { optimal, infeasible, max_iterations, numerical_failure };
const char* status_name(SolveStatus s);

struct SolveOutcome {
    SolveStatus status = SolveStatus::numerical_failure;
    Eigen::VectorXd primal;  // de-homogenized solution (optimal only)
    double objective = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    double primal_residual = std::numeric_limits<double>::infinity();
    double dual_residual = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    double certificate_residual = std::numeric_limits<double>::infinity();
    std::string message;
    // For infeasible outcomes: share of the Farkas certificate carried by each
    // constraint family, largest first.
    std::vector<std::pair<Family, double>> certificate_families;
};

// --- builders ------------------------------------------------------------

// For each complex row u_i of `rows`, adds |u_i^T x_vars - rhs_i| <= bound.
// With a variable bound, `bound_var` is the index of the bound variable and
// `bound_const` is added to it. Rows whose imaginary part is identically zero
// (and rhs imaginary part zero) degenerate to two orthant rows.
// `x_cols` maps the row entries onto program variables: row entry j multiplies
// variable x_cols_start + j.
void add_complex_linf_epigraph(ConeProgram& prog,
                               const Eigen::MatrixXcd& rows,
                               const Eigen::VectorXcd& rhs, int bound_var,
                               double bound_const, int x_cols_start,
                               Family fam);

// Robustness cone at one frequency:
//   sqrt(floor) ||A(omega) x||_2 <= Re[e^{j omega tau_d} steer^T x].
// Throws NonpositiveFloor for floor <= 0.
void add_wng_cone(ConeProgram& prog, const Eigen::MatrixXcd& a_omega,
                  const Eigen::VectorXcd& steer_row, double tau_d, double omega,
                  double floor, int x_cols_start);

// ||A x||_2 <= cap with constant cap (competing-design robustness rows).
void add_l2_cap(ConeProgram& prog, const Eigen::MatrixXcd& a_omega, double cap,
                int x_cols_start, Family fam);

}  // namespace bfd
