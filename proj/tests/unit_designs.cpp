// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "bfdesign/designs.hpp"
#include "bfdesign/metrics.hpp"
#include "bfdesign/response.hpp"

using namespace bfd;

namespace {
constexpr double kPi = 3.14159265358979323846;

ConvexDesignSpec small_example(int grid = 24) {
    ConvexDesignSpec spec{ArrayGeometry::uniform(7, 0.04, 8000.0, 340.0)};
    spec.bands.omega_lo = 2.0 * kPi * 1500.0 / 8000.0;
    spec.bands.omega_hi = 2.0 * kPi * 3500.0 / 8000.0;
    spec.bands.passband = {80.0 * kPi / 180.0, 100.0 * kPi / 180.0};
    spec.bands.stopband = {{0.0, kPi / 3.0}, {2.0 * kPi / 3.0, kPi}};
    spec.bands.theta_d = kPi / 2.0;
    spec.filter_length = 20;
    spec.stopband_ceiling = db_to_amp(-6.0);
    spec.wng_floor = 1.0;
    spec.tau_d = 0.0;
    spec.grid_freq = grid;
    spec.grid_angle = grid;
    return spec;
}
}  // namespace

TEST_CASE("desired passband samples") {
    BandSpec band;
    band.omega_lo = 1.0;
    band.omega_hi = 2.0;
    band.passband = {1.3, 1.9};
    band.theta_d = 1.5;
    const SampleSet grid = uniform_grid(band, 4, 3);

    SUBCASE("zero delay targets unity") {
        const Eigen::VectorXcd d = build_desired_passband(grid, 0.0);
        REQUIRE(d.size() == 12);
        for (int i = 0; i < d.size(); ++i)
            CHECK(std::abs(d[i] - Complex(1.0, 0.0)) < 1e-15);
    }
    SUBCASE("direct formula and unit modulus") {
        const Eigen::VectorXcd d = build_desired_passband(grid, 9.5);
        int i = 0;
        for (const SamplePoint& p : grid.points) {
            if (p.role != SampleRole::passband) continue;
            const Complex want = std::exp(Complex(0.0, -9.5 * p.omega));
            CHECK(std::abs(d[i] - want) < 1e-14);
            CHECK(std::abs(std::abs(d[i]) - 1.0) < 1e-15);
            ++i;
        }
    }
}

TEST_CASE("degenerate scalar design matches a 1-D minimax scan") {
    // Two quasi-coincident elements tied by symmetry behave as one scalar
    // gain; with no stopband and a vanishing WNG floor the optimum is the
    // 1-D Chebyshev fit of the target phasor over the two grid points.
    ConvexDesignSpec spec{ArrayGeometry({-1e-13, 1e-13}, 8000.0, 340.0)};
    spec.bands.omega_lo = 0.8;
    spec.bands.omega_hi = 2.0;
    spec.bands.passband = {1.4, 1.7};
    spec.bands.theta_d = 1.5;
    spec.filter_length = 1;
    spec.stopband_ceiling = 1e9;  // effectively absent (and no intervals)
    spec.wng_floor = 1e-12;
    spec.tau_d = 0.0;
    spec.symmetry = true;
    spec.grid_freq = 2;
    spec.grid_angle = 2;
    const DesignResult res = design_v1(spec);
    REQUIRE(res.outcome.status == SolveStatus::optimal);

    // brute-force oracle over the scalar total gain
    auto worst = [&](double s) {
        double w = 0.0;
        for (double omega : {0.8, 2.0})
            w = std::max(w, std::abs(Complex(s, 0.0) -
                                     std::exp(Complex(0.0, -omega * 0.0))));
        return w;
    };
    double best = 1e9;
    for (double s = -2.0; s <= 2.0; s += 1e-5) best = std::min(best, worst(s));
    CHECK(res.j_sol == doctest::Approx(best).epsilon(1e-4));
}

TEST_CASE("returned solutions satisfy their own constraints") {
    const ConvexDesignSpec spec = small_example();
    const DesignResult res = design_v1(spec);
    REQUIRE(res.outcome.status == SolveStatus::optimal);
    CHECK(res.stopband_peak <= spec.stopband_ceiling * (1.0 + 1e-6));
    CHECK(res.min_constraint_wng >= spec.wng_floor * (1.0 - 1e-6));
    CHECK(res.j_sol > 0.0);
}

TEST_CASE("symmetry flag ties the coefficients") {
    ConvexDesignSpec spec = small_example();
    spec.symmetry = true;
    const DesignResult res = design_v1(spec);
    REQUIRE(res.outcome.status == SolveStatus::optimal);
    double resid = 0.0;
    for (int n = 0; n < 7; ++n)
        for (int l = 0; l < 20; ++l)
            resid = std::max(resid,
                             std::abs(res.bank(n, l) - res.bank(6 - n, l)));
    CHECK(resid <= 1e-9);
    // symmetric coefficients on a symmetric array give a symmetric pattern
    const Eigen::VectorXd omegas = linspace(spec.bands.omega_lo,
                                            spec.bands.omega_hi, 20);
    for (int m = 0; m < 20; ++m)
        for (int k = 0; k < 20; ++k) {
            const double theta = kPi * k / 19.0;
            const Complex b1 =
                response(spec.geometry, res.bank, omegas[m], theta);
            const Complex b2 =
                response(spec.geometry, res.bank, omegas[m], kPi - theta);
            CHECK(std::abs(b1 - b2) < 1e-9);
        }
}

TEST_CASE("linear-phase flag forces the reversal tying and a flat delay") {
    ConvexDesignSpec spec = small_example();
    spec.linear_phase = true;
    spec.tau_d = 9.5;
    spec.stopband_ceiling = db_to_amp(-10.0);
    const DesignResult res = design_v1(spec);
    REQUIRE(res.outcome.status == SolveStatus::optimal);
    double resid = 0.0;
    for (int n = 0; n < 7; ++n)
        for (int l = 0; l < 20; ++l)
            resid = std::max(
                resid, std::abs(res.bank(n, l) - res.bank(6 - n, 19 - l)));
    CHECK(resid <= 1e-9);
    const DesignReport rep =
        evaluate(spec.geometry, res.bank, spec.bands, spec.tau_d,
                 DesignFamily::convex, {60, 60, false});
    CHECK(rep.sigma_tau_samples <= 1e-8);
    CHECK(rep.tau_avg_samples == doctest::Approx(9.5).epsilon(1e-9));
}

TEST_CASE("tau_d validation for linear phase") {
    ConvexDesignSpec spec = small_example();
    spec.linear_phase = true;
    spec.tau_d = 3.0;  // not (L-1)/2
    CHECK_THROWS_AS(design_v1(spec), ConfigError);
}

TEST_CASE("regularization never improves the reported cost") {
    ConvexDesignSpec plain = small_example(16);
    ConvexDesignSpec reg = plain;
    reg.lambda = 0.01;
    const DesignResult a = design_v1(plain);
    const DesignResult b = design_v1(reg);
    REQUIRE(a.outcome.status == SolveStatus::optimal);
    REQUIRE(b.outcome.status == SolveStatus::optimal);
    CHECK(b.j_sol >= a.j_sol - 1e-8);
}

TEST_CASE("reduced variables and equality rows give the same optimum") {
    SUBCASE("mirror tying") {
        ConvexDesignSpec spec = small_example(16);
        spec.symmetry = true;
        spec.tying = TyingImpl::equality_rows;
        const DesignResult eq = design_v1(spec);
        spec.tying = TyingImpl::reduced_variables;
        const DesignResult red = design_v1(spec);
        REQUIRE(eq.outcome.status == SolveStatus::optimal);
        REQUIRE(red.outcome.status == SolveStatus::optimal);
        CHECK(std::abs(eq.j_sol - red.j_sol) <= 1e-6);
    }
    SUBCASE("reversal tying") {
        ConvexDesignSpec spec = small_example(16);
        spec.linear_phase = true;
        spec.tau_d = 9.5;
        spec.stopband_ceiling = db_to_amp(-10.0);
        spec.tying = TyingImpl::equality_rows;
        const DesignResult eq = design_v1(spec);
        spec.tying = TyingImpl::reduced_variables;
        const DesignResult red = design_v1(spec);
        REQUIRE(eq.outcome.status == SolveStatus::optimal);
        REQUIRE(red.outcome.status == SolveStatus::optimal);
        CHECK(std::abs(eq.j_sol - red.j_sol) <= 1e-6);
    }
}

TEST_CASE("pinning the steering response never improves the optimum") {
    const ConvexDesignSpec spec = small_example(16);
    const DesignResult free_run = design_v1(spec);
    const DesignResult pinned = design_c(spec);
    REQUIRE(free_run.outcome.status == SolveStatus::optimal);
    REQUIRE(pinned.outcome.status == SolveStatus::optimal);
    CHECK(pinned.j_sol >= free_run.j_sol - 1e-8);

    // tightening the stopband cannot help either
    ConvexDesignSpec tight = spec;
    tight.stopband_ceiling = spec.stopband_ceiling * 0.8;
    const DesignResult tight_run = design_v1(tight);
    REQUIRE(tight_run.outcome.status == SolveStatus::optimal);
    CHECK(tight_run.j_sol >= free_run.j_sol - 1e-8);
}
