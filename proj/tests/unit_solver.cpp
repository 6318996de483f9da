// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "bfdesign/cone.hpp"
#include "bfdesign/solver.hpp"

using namespace bfd;

TEST_CASE("scalar minimax: min t s.t. |x-1| <= t") {
    ConeProgram prog(2);  // (x, t)
    prog.objective()[1] = 1.0;
    Eigen::MatrixXcd rows(1, 1);
    rows(0, 0) = Complex(1.0, 0.0);
    Eigen::VectorXcd rhs(1);
    rhs[0] = Complex(1.0, 0.0);
    add_complex_linf_epigraph(prog, rows, rhs, 1, 0.0, 0, Family::passband);
    // keep t bounded below
    Eigen::VectorXd a(2);
    a << 0.0, -1.0;
    prog.add_linear_le(a, 0.0, Family::objective);

    const SolveOutcome out = solve(prog, 1e-9);
    REQUIRE(out.status == SolveStatus::optimal);
    CHECK(out.primal[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(out.objective) < 1e-7);
}

TEST_CASE("infeasible box") {
    ConeProgram prog(1);
    Eigen::VectorXd a(1);
    a << -1.0;
    prog.add_linear_le(a, -1.0, Family::passband);  // x >= 1
    a << 1.0;
    prog.add_linear_le(a, 0.0, Family::stopband);  // x <= 0
    const SolveOutcome out = solve(prog, 1e-9);
    CHECK(out.status == SolveStatus::infeasible);
    CHECK(out.certificate_residual <= 1e-8);
    REQUIRE(!out.certificate_families.empty());
}

TEST_CASE("second-order cone optimum on the unit disk") {
    // min -x - y  s.t. ||(x, y)|| <= 1
    ConeProgram prog(2);
    prog.objective() << -1.0, -1.0;
    prog.add_soc(Eigen::VectorXd::Zero(2), 1.0, Eigen::MatrixXd::Identity(2, 2),
                 Eigen::VectorXd::Zero(2), Family::other);
    const SolveOutcome out = solve(prog, 1e-9);
    REQUIRE(out.status == SolveStatus::optimal);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(out.primal[0] == doctest::Approx(r).epsilon(1e-6));
    CHECK(out.primal[1] == doctest::Approx(r).epsilon(1e-6));
    CHECK(out.objective == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("equality-constrained least norm") {
    // min t s.t. ||(x, y)|| <= t, x + y = 1  ->  x = y = 1/2, t = 1/sqrt(2)
    ConeProgram prog(3);
    prog.objective()[2] = 1.0;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(3);
    f[2] = 1.0;
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2, 3);
    F(0, 0) = 1.0;
    F(1, 1) = 1.0;
    prog.add_soc(f, 0.0, F, Eigen::VectorXd::Zero(2), Family::other);
    Eigen::VectorXd eq(3);
    eq << 1.0, 1.0, 0.0;
    prog.add_equality(eq, 1.0);
    const SolveOutcome out = solve(prog, 1e-9);
    REQUIRE(out.status == SolveStatus::optimal);
    CHECK(out.primal[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(out.primal[1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(out.objective == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-7));
}

TEST_CASE("redundant and inconsistent equalities") {
    SUBCASE("duplicated equality rows are harmless") {
        ConeProgram prog(2);
        prog.objective() << 1.0, 0.0;
        Eigen::VectorXd eq(2);
        eq << 1.0, 1.0;
        prog.add_equality(eq, 1.0);
        prog.add_equality(eq, 1.0);
        prog.add_equality(2.0 * eq, 2.0);
        Eigen::VectorXd a(2);
        a << -1.0, 0.0;
        prog.add_linear_le(a, 0.0, Family::other);   // x >= 0
        a << 0.0, -1.0;
        prog.add_linear_le(a, 0.0, Family::other);   // y >= 0
        const SolveOutcome out = solve(prog, 1e-9);
        REQUIRE(out.status == SolveStatus::optimal);
        CHECK(out.objective == doctest::Approx(0.0).epsilon(1e-6));
    }
    SUBCASE("conflicting equalities are infeasible") {
        ConeProgram prog(2);
        Eigen::VectorXd eq(2);
        eq << 1.0, 1.0;
        prog.add_equality(eq, 1.0);
        prog.add_equality(eq, 2.0);
        Eigen::VectorXd a(2);
        a << 1.0, 0.0;
        prog.add_linear_le(a, 10.0, Family::other);
        const SolveOutcome out = solve(prog, 1e-9);
        CHECK(out.status == SolveStatus::infeasible);
    }
}

TEST_CASE("infeasible mix of cone and half-space") {
    // ||(x, y)|| <= 0.5 together with x >= 1
    ConeProgram prog(2);
    prog.objective() << 0.0, 1.0;
    prog.add_soc(Eigen::VectorXd::Zero(2), 0.5, Eigen::MatrixXd::Identity(2, 2),
                 Eigen::VectorXd::Zero(2), Family::trust_region);
    Eigen::VectorXd a(2);
    a << -1.0, 0.0;
    prog.add_linear_le(a, -1.0, Family::passband);
    const SolveOutcome out = solve(prog, 1e-9);
    CHECK(out.status == SolveStatus::infeasible);
    REQUIRE(!out.certificate_families.empty());
}

TEST_CASE("unbounded problems are reported as failures, not answers") {
    ConeProgram prog(1);
    prog.objective() << 1.0;
    Eigen::VectorXd a(1);
    a << 1.0;
    prog.add_linear_le(a, 0.0, Family::other);  // x <= 0, minimize x
    const SolveOutcome out = solve(prog, 1e-9);
    CHECK(out.status == SolveStatus::numerical_failure);
    CHECK(out.message.find("unbounded") != std::string::npos);
}

TEST_CASE("random feasible SOCPs return certified-feasible optima") {
    std::mt19937 rng(79);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 6;
        ConeProgram prog(n);
        for (int j = 0; j < n; ++j) prog.objective()[j] = dist(rng);
        // random interior point defines feasible right-hand sides
        Eigen::VectorXd x0(n);
        for (int j = 0; j < n; ++j) x0[j] = dist(rng);
        for (int i = 0; i < 4; ++i) {
            Eigen::MatrixXd F(3, n);
            for (int r = 0; r < 3; ++r)
                for (int j = 0; j < n; ++j) F(r, j) = dist(rng);
            const Eigen::VectorXd g = Eigen::VectorXd::Zero(3);
            const double margin = 0.5 + 0.5 * std::abs(dist(rng));
            const double d = (F * x0 + g).norm() + margin;
            prog.add_soc(Eigen::VectorXd::Zero(n), d, F, g, Family::other);
        }
        // box to keep it bounded
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
            a[j] = 1.0;
            prog.add_linear_le(a, 3.0 + std::abs(x0[j]), Family::other);
            a[j] = -1.0;
            prog.add_linear_le(a, 3.0 + std::abs(x0[j]), Family::other);
        }
        const SolveOutcome out = solve(prog, 1e-9);
        REQUIRE(out.status == SolveStatus::optimal);
        CHECK(prog.check_feasibility(out.primal).feasible(1e-7));
        CHECK(out.objective <= prog.objective().dot(x0) + 1e-7);
    }
}

TEST_CASE("constraint order does not move the optimum") {
    std::mt19937 rng(83);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int n = 4;
    Eigen::VectorXd c(n), x0(n);
    for (int j = 0; j < n; ++j) {
        c[j] = dist(rng);
        x0[j] = dist(rng);
    }
    std::vector<Eigen::MatrixXd> Fs;
    std::vector<double> ds;
    for (int i = 0; i < 5; ++i) {
        Eigen::MatrixXd F(2, n);
        for (int r = 0; r < 2; ++r)
            for (int j = 0; j < n; ++j) F(r, j) = dist(rng);
        Fs.push_back(F);
        ds.push_back((F * x0).norm() + 1.0);
    }
    auto build = [&](const std::vector<int>& order) {
        ConeProgram prog(n);
        prog.objective() = c;
        for (int i : order)
            prog.add_soc(Eigen::VectorXd::Zero(n), ds[static_cast<size_t>(i)],
                         Fs[static_cast<size_t>(i)], Eigen::VectorXd::Zero(2),
                         Family::other);
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
            a[j] = 1.0;
            prog.add_linear_le(a, 5.0, Family::other);
            a[j] = -1.0;
            prog.add_linear_le(a, 5.0, Family::other);
        }
        return solve(prog, 1e-9);
    };
    const SolveOutcome fwd = build({0, 1, 2, 3, 4});
    const SolveOutcome rev = build({4, 2, 0, 3, 1});
    REQUIRE(fwd.status == SolveStatus::optimal);
    REQUIRE(rev.status == SolveStatus::optimal);
    CHECK(std::abs(fwd.objective - rev.objective) < 1e-8);
}
