// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "bfdesign/reduced.hpp"
#include "bfdesign/response.hpp"

using namespace bfd;

namespace {

constexpr double kPi = 3.14159265358979323846;

FilterBank random_bank(int n_ch, int len, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    FilterBank bank(n_ch, len);
    for (int n = 0; n < n_ch; ++n)
        for (int l = 0; l < len; ++l) bank(n, l) = dist(rng);
    return bank;
}

// Central finite differences of a scalar function of the flattened bank.
Eigen::VectorXd fd_gradient(const std::function<double(const FilterBank&)>& f,
                            const FilterBank& x, double base_step) {
    const Eigen::VectorXd flat = x.flatten();
    Eigen::VectorXd grad(flat.size());
    for (int i = 0; i < flat.size(); ++i) {
        const double step = base_step * (1.0 + std::abs(flat[i]));
        Eigen::VectorXd up = flat, dn = flat;
        up[i] += step;
        dn[i] -= step;
        grad[i] = (f(FilterBank::from_flat(up, x.num_channels(),
                                           x.filter_length())) -
                   f(FilterBank::from_flat(dn, x.num_channels(),
                                           x.filter_length()))) /
                  (2.0 * step);
    }
    return grad;
}

double rel_err_max(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
    return (got - want).cwiseAbs().maxCoeff() /
           (1.0 + want.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("steering vector basics") {
    SUBCASE("single element at origin") {
        const ArrayGeometry geom({-1e-16, 1e-16}, 8000.0, 340.0);
        // effectively d=0 for both elements
        const Eigen::VectorXcd g = steering_vector(geom, 1, 1.3, 0.7);
        CHECK(std::abs(g[0] - Complex(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("broadside is element independent") {
        const ArrayGeometry geom = ArrayGeometry::uniform(5, 0.03, 8000.0, 340.0);
        const double omega = 1.1;
        const Eigen::VectorXcd g = steering_vector(geom, 4, omega, kPi / 2.0);
        for (int n = 0; n < 5; ++n)
            for (int l = 0; l < 4; ++l) {
                const Complex want(std::cos(-omega * l), std::sin(-omega * l));
                CHECK(std::abs(g[n * 4 + l] - want) < 1e-14);
            }
    }
    SUBCASE("two-element endfire phases against scalar evaluation") {
        const ArrayGeometry geom({-0.02, 0.02}, 8000.0, 340.0);
        const double omega = kPi / 2.0;
        const Eigen::VectorXcd g = steering_vector(geom, 1, omega, 0.0);
        const double shift = 8000.0 * 0.02 / 340.0;
        // element 0 at -0.02 m: k = +shift, element 1: k = -shift
        CHECK(std::abs(g[0] - std::exp(Complex(0.0, omega * shift))) < 1e-14);
        CHECK(std::abs(g[1] - std::exp(Complex(0.0, -omega * shift))) < 1e-14);
    }
    SUBCASE("unit magnitude everywhere") {
        const ArrayGeometry geom = ArrayGeometry::uniform(7, 0.04, 8000.0, 340.0);
        const Eigen::VectorXcd g = steering_vector(geom, 20, 2.1, 1.9);
        for (int i = 0; i < g.size(); ++i)
            CHECK(std::abs(std::abs(g[i]) - 1.0) < 1e-14);
    }
}

TEST_CASE("response agrees with the term-by-term double sum") {
    std::mt19937 rng(11);
    const ArrayGeometry geom = ArrayGeometry::uniform(6, 0.035, 8000.0, 340.0);
    std::uniform_real_distribution<double> om(0.3, 2.8), th(0.0, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        const FilterBank x = random_bank(6, 9, rng);
        const double omega = om(rng), theta = th(rng);
        Complex want(0.0, 0.0);
        for (int n = 0; n < 6; ++n)
            for (int l = 0; l < 9; ++l) {
                const double k = phase_slope(geom, n, l, theta);
                want += x(n, l) * std::exp(Complex(0.0, omega * k));
            }
        CHECK(std::abs(response(geom, x, omega, theta) - want) < 1e-12);
    }
}

TEST_CASE("response is linear and matches steering-vector dot product") {
    std::mt19937 rng(13);
    const ArrayGeometry geom = ArrayGeometry::uniform(4, 0.05, 8000.0, 340.0);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const FilterBank x = random_bank(4, 7, rng);
        const FilterBank y = random_bank(4, 7, rng);
        const double a = dist(rng), b = dist(rng);
        const double omega = 1.7, theta = 0.9;
        FilterBank mix(4, 7);
        mix.coeffs() = a * x.coeffs() + b * y.coeffs();
        const Complex lhs = response(geom, mix, omega, theta);
        const Complex rhs = a * response(geom, x, omega, theta) +
                            b * response(geom, y, omega, theta);
        CHECK(std::abs(lhs - rhs) < 1e-12);
        const Eigen::VectorXcd g = steering_vector(geom, 7, omega, theta);
        const Complex gx = (g.transpose() * x.flatten().cast<Complex>())(0);
        CHECK(std::abs(response(geom, x, omega, theta) - gx) < 1e-11);
    }
}

TEST_CASE("single tap gives unit-magnitude response") {
    const ArrayGeometry geom = ArrayGeometry::uniform(3, 0.04, 8000.0, 340.0);
    FilterBank x(3, 5);
    x(0, 0) = 1.0;
    const Complex b = response(geom, x, 1.234, 0.456);
    CHECK(std::abs(std::abs(b) - 1.0) < 1e-14);
}

TEST_CASE("white noise gain") {
    const int n_ch = 7;
    const ArrayGeometry geom = ArrayGeometry::uniform(n_ch, 0.04, 8000.0, 340.0);

    SUBCASE("broadside delay-and-sum gain equals N") {
        FilterBank x(n_ch, 20);
        for (int n = 0; n < n_ch; ++n) x(n, 0) = 1.0 / n_ch;
        CHECK(white_noise_gain(geom, x, 1.3, kPi / 2.0) ==
              doctest::Approx(n_ch).epsilon(1e-12));
    }
    SUBCASE("single active sensor gives 0 dB") {
        FilterBank x(n_ch, 20);
        x(0, 0) = 1.0;
        CHECK(white_noise_gain(geom, x, 0.9, 1.1) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("matrix and scalar forms agree to 1e-12 relative") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> om(0.3, 2.8), th(0.0, kPi);
        for (int trial = 0; trial < 100; ++trial) {
            const FilterBank x = random_bank(n_ch, 8, rng);
            const double omega = om(rng), theta_d = th(rng);
            const double got = white_noise_gain(geom, x, omega, theta_d);
            const Eigen::MatrixXcd a = wng_matrix(geom, 8, omega);
            const Eigen::VectorXcd g = steering_vector(geom, 8, omega, theta_d);
            const Eigen::VectorXcd flat = x.flatten().cast<Complex>();
            const double num = std::norm(Complex((g.transpose() * flat)(0)));
            const double den = (a * flat).squaredNorm();
            CHECK(std::abs(got - num / den) <= 1e-12 * std::abs(num / den));
        }
    }
    SUBCASE("zero filters raise ZeroFilterEnergy") {
        FilterBank x(n_ch, 4);
        CHECK_THROWS_AS(white_noise_gain(geom, x, 1.0, 1.0), ZeroFilterEnergy);
    }
}

TEST_CASE("group delay") {
    SUBCASE("pure delay of a single tap at the origin element") {
        const ArrayGeometry geom({-0.05, 0.0, 0.05}, 8000.0, 340.0);
        for (int l : {0, 3, 7}) {
            FilterBank x(3, 8);
            x(1, l) = 0.7;
            CHECK(group_delay(geom, x, 1.1, 0.8) ==
                  doctest::Approx(l).epsilon(1e-12));
        }
    }
    SUBCASE("matches finite differences of the unwrapped phase") {
        std::mt19937 rng(23);
        const ArrayGeometry geom = ArrayGeometry::uniform(5, 0.04, 8000.0, 340.0);
        std::uniform_real_distribution<double> om(0.4, 2.6), th(0.0, kPi);
        for (int trial = 0; trial < 25; ++trial) {
            const FilterBank x = random_bank(5, 10, rng);
            const double omega = om(rng), theta = th(rng);
            const Complex b = response(geom, x, omega, theta);
            if (std::norm(b) < 1e-3) continue;  // keep the oracle well posed
            const double step = 1e-6;
            const Complex bp = response(geom, x, omega + step, theta);
            const Complex bm = response(geom, x, omega - step, theta);
            double dphase = std::arg(bp) - std::arg(bm);
            while (dphase > kPi) dphase -= 2.0 * kPi;
            while (dphase < -kPi) dphase += 2.0 * kPi;
            const double fd_tau = -dphase / (2.0 * step);
            CHECK(group_delay(geom, x, omega, theta) ==
                  doctest::Approx(fd_tau).epsilon(0).scale(1.0).epsilon(1e-4));
        }
    }
    SUBCASE("null response raises NearZeroResponse") {
        const ArrayGeometry geom({-0.02, 0.02}, 8000.0, 340.0);
        FilterBank x(2, 2);
        // two taps half a period apart at omega = pi: B = 0
        x(0, 0) = 1.0;
        x(0, 1) = 1.0;
        CHECK_THROWS_AS(group_delay(geom, x, kPi, kPi / 2.0), NearZeroResponse);
    }
}

TEST_CASE("group delay gradient") {
    std::mt19937 rng(29);
    const ArrayGeometry geom = ArrayGeometry::uniform(5, 0.04, 8000.0, 340.0);
    std::uniform_real_distribution<double> om(0.4, 2.6), th(0.0, kPi);

    SUBCASE("single tap") {
        FilterBank x(5, 6);
        x(2, 3) = 1.0;
        const double omega = 1.1, theta = 0.6;
        const Eigen::VectorXd grad = group_delay_gradient(geom, x, omega, theta);
        const Eigen::VectorXd fd = fd_gradient(
            [&](const FilterBank& b) { return group_delay(geom, b, omega, theta); },
            x, 1e-7);
        CHECK(rel_err_max(grad, fd) < 1e-5);
    }
    SUBCASE("50 random instances match finite differences") {
        int done = 0;
        while (done < 50) {
            const FilterBank x = random_bank(5, 6, rng);
            const double omega = om(rng), theta = th(rng);
            if (std::norm(response(geom, x, omega, theta)) < 1e-2) continue;
            const Eigen::VectorXd grad =
                group_delay_gradient(geom, x, omega, theta);
            const Eigen::VectorXd fd = fd_gradient(
                [&](const FilterBank& b) {
                    return group_delay(geom, b, omega, theta);
                },
                x, 1e-7);
            CHECK(rel_err_max(grad, fd) < 1e-5);
            ++done;
        }
    }
    SUBCASE("zero-homogeneity: grad . x == 0") {
        for (int trial = 0; trial < 10; ++trial) {
            const FilterBank x = random_bank(5, 6, rng);
            const double omega = om(rng), theta = th(rng);
            if (std::norm(response(geom, x, omega, theta)) < 1e-2) continue;
            const Eigen::VectorXd grad =
                group_delay_gradient(geom, x, omega, theta);
            CHECK(std::abs(grad.dot(x.flatten())) < 1e-9);
            FilterBank x2(5, 6);
            x2.coeffs() = 2.0 * x.coeffs();
            CHECK(group_delay(geom, x2, omega, theta) ==
                  doctest::Approx(group_delay(geom, x, omega, theta))
                      .epsilon(1e-10));
        }
    }
}

TEST_CASE("magnitude-squared error and gradient") {
    const ArrayGeometry geom = ArrayGeometry::uniform(5, 0.04, 8000.0, 340.0);
    SUBCASE("zero point of the quadratic") {
        FilterBank x(5, 6);
        const ValueGradient vg = magsq_error_gradient(geom, x, 1.0, 1.0, 1.0);
        CHECK(vg.value == doctest::Approx(-1.0));
        CHECK(vg.gradient.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("on-target response") {
        FilterBank x(5, 6);
        for (int n = 0; n < 5; ++n) x(n, 0) = 0.2;
        const ValueGradient vg =
            magsq_error_gradient(geom, x, 1.3, kPi / 2.0, 1.0);
        CHECK(std::abs(vg.value) < 1e-12);
    }
    SUBCASE("random instances match finite differences") {
        std::mt19937 rng(31);
        std::uniform_real_distribution<double> om(0.4, 2.6), th(0.0, kPi);
        for (int trial = 0; trial < 50; ++trial) {
            const FilterBank x = random_bank(5, 6, rng);
            const double omega = om(rng), theta = th(rng);
            const ValueGradient vg =
                magsq_error_gradient(geom, x, omega, theta, 1.0);
            const Eigen::VectorXd fd = fd_gradient(
                [&](const FilterBank& b) {
                    return magsq_error_gradient(geom, b, omega, theta, 1.0)
                        .value;
                },
                x, 1e-6);
            CHECK(rel_err_max(vg.gradient, fd) < 1e-8);
        }
    }
}

TEST_CASE("wng error and gradient") {
    const int n_ch = 5;
    const ArrayGeometry geom = ArrayGeometry::uniform(n_ch, 0.04, 8000.0, 340.0);
    SUBCASE("delay-and-sum shortfall") {
        FilterBank x(n_ch, 6);
        for (int n = 0; n < n_ch; ++n) x(n, 0) = 1.0 / n_ch;
        const ValueGradient vg =
            wng_error_gradient(geom, x, 1.1, kPi / 2.0, 1.0);
        CHECK(vg.value == doctest::Approx(n_ch - 1.0).epsilon(1e-12));
    }
    SUBCASE("scale invariance of the gain") {
        std::mt19937 rng(37);
        std::uniform_real_distribution<double> om(0.4, 2.6), th(0.0, kPi);
        for (int trial = 0; trial < 10; ++trial) {
            const FilterBank x = random_bank(n_ch, 6, rng);
            const double omega = om(rng), theta_d = th(rng);
            const ValueGradient vg =
                wng_error_gradient(geom, x, omega, theta_d, 1.0);
            CHECK(std::abs(vg.gradient.dot(x.flatten())) < 1e-9);
            FilterBank x3(n_ch, 6);
            x3.coeffs() = 3.0 * x.coeffs();
            CHECK(white_noise_gain(geom, x3, omega, theta_d) ==
                  doctest::Approx(white_noise_gain(geom, x, omega, theta_d))
                      .epsilon(1e-10));
        }
    }
    SUBCASE("50 random instances match finite differences") {
        std::mt19937 rng(41);
        std::uniform_real_distribution<double> om(0.4, 2.6), th(0.0, kPi);
        for (int trial = 0; trial < 50; ++trial) {
            const FilterBank x = random_bank(n_ch, 6, rng);
            const double omega = om(rng), theta_d = th(rng);
            const ValueGradient vg =
                wng_error_gradient(geom, x, omega, theta_d, 1.0);
            const Eigen::VectorXd fd = fd_gradient(
                [&](const FilterBank& b) {
                    return wng_error_gradient(geom, b, omega, theta_d, 1.0)
                        .value;
                },
                x, 1e-6);
            CHECK(rel_err_max(vg.gradient, fd) < 1e-6);
        }
    }
}

TEST_CASE("reduced symmetric parameterization") {
    const ArrayGeometry geom = ArrayGeometry::uniform(7, 0.04, 8000.0, 340.0);
    const int len = 6;
    const Parameterization param = Parameterization::symmetric(geom, len);
    REQUIRE(param.reduced_size() == 4 * len);

    SUBCASE("broadside reduced steering") {
        const Eigen::VectorXcd gr =
            reduced_steering_symmetric(geom, len, 1.2, kPi / 2.0);
        for (int l = 0; l < len; ++l) {
            const Complex want =
                2.0 * std::exp(Complex(0.0, -1.2 * static_cast<double>(l)));
            CHECK(std::abs(gr[l] - want) < 1e-13);
        }
    }
    SUBCASE("two-element scalar check") {
        const ArrayGeometry g2({-0.02, 0.02}, 8000.0, 340.0);
        const double omega = 1.4, theta = 0.8;
        const Eigen::VectorXcd gr =
            reduced_steering_symmetric(g2, 1, omega, theta);
        const double want =
            2.0 * std::cos(omega * 8000.0 * 0.02 * std::cos(theta) / 340.0);
        CHECK(std::abs(gr[0] - Complex(want, 0.0)) < 1e-13);
    }
    SUBCASE("random expansion equivalence to 1e-12") {
        std::mt19937 rng(43);
        std::uniform_real_distribution<double> dist(-1.0, 1.0), om(0.4, 2.6),
            th(0.0, kPi);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd xr(param.reduced_size());
            for (int i = 0; i < xr.size(); ++i) xr[i] = dist(rng);
            const double omega = om(rng), theta = th(rng);
            const Eigen::VectorXcd gr =
                reduced_steering_symmetric(geom, len, omega, theta);
            const Complex via_reduced = gr.transpose() * xr.cast<Complex>();
            const Complex via_full =
                response(geom, param.expand_bank(xr), omega, theta);
            CHECK(std::abs(via_reduced - via_full) < 1e-12);
        }
    }
    SUBCASE("expanded banks have symmetric beampatterns") {
        std::mt19937 rng(47);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Eigen::VectorXd xr(param.reduced_size());
        for (int i = 0; i < xr.size(); ++i) xr[i] = dist(rng);
        const FilterBank bank = param.expand_bank(xr);
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                const double omega = 0.4 + 2.2 * i / 19.0;
                const double theta = kPi * j / 19.0;
                const Complex b1 = response(geom, bank, omega, theta);
                const Complex b2 = response(geom, bank, omega, kPi - theta);
                CHECK(std::abs(b1 - b2) < 1e-12);
            }
    }
    SUBCASE("asymmetric geometry is rejected") {
        const ArrayGeometry bad({-0.1, 0.0, 0.11}, 8000.0, 340.0);
        CHECK_THROWS_AS(Parameterization::symmetric(bad, 4), AsymmetricGeometry);
        CHECK_THROWS_AS(reduced_steering_symmetric(bad, 4, 1.0, 1.0),
                        AsymmetricGeometry);
    }
}

TEST_CASE("reduced linear-phase parameterization") {
    const ArrayGeometry geom = ArrayGeometry::uniform(7, 0.04, 8000.0, 340.0);
    const int len = 20;
    const Parameterization param = Parameterization::linear_phase(geom, len);
    REQUIRE(param.reduced_size() == 3 * len + len / 2);

    std::mt19937 rng(53);
    std::uniform_real_distribution<double> dist(-1.0, 1.0), om(0.4, 2.6),
        th(0.0, kPi);

    SUBCASE("random expansion equivalence to 1e-12") {
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd xr(param.reduced_size());
            for (int i = 0; i < xr.size(); ++i) xr[i] = dist(rng);
            const double omega = om(rng), theta = th(rng);
            const Eigen::VectorXcd gr =
                reduced_steering_linear_phase(geom, len, omega, theta);
            const Complex via_reduced = gr.transpose() * xr.cast<Complex>();
            const Complex via_full =
                response(geom, param.expand_bank(xr), omega, theta);
            CHECK(std::abs(via_reduced - via_full) < 1e-12);
        }
    }
    SUBCASE("phase factor for L = 20 is exp(-j 9.5 omega)") {
        const double omega = 1.0;
        const Eigen::VectorXcd gr =
            reduced_steering_linear_phase(geom, len, omega, 1.0);
        // every entry shares the common rotation
        const Complex rot = std::exp(Complex(0.0, -9.5 * omega));
        for (int i = 0; i < gr.size(); ++i) {
            const Complex unrot = gr[i] / rot;
            CHECK(std::abs(unrot.imag()) < 1e-13);
        }
    }
    SUBCASE("expanded banks delay every point by (L-1)/2") {
        Eigen::VectorXd xr(param.reduced_size());
        for (int i = 0; i < xr.size(); ++i) xr[i] = dist(rng);
        const FilterBank bank = param.expand_bank(xr);
        int checked = 0;
        for (int i = 0; i < 20 && checked < 200; ++i)
            for (int j = 0; j < 20; ++j) {
                const double omega = 0.4 + 2.2 * i / 19.0;
                const double theta = kPi * j / 19.0;
                const Complex b = response(geom, bank, omega, theta);
                const Complex rot = std::exp(Complex(0.0, omega * 9.5));
                CHECK(std::abs((rot * b).imag()) < 1e-12);
                if (std::norm(b) < 1e-4) continue;
                CHECK(group_delay(geom, bank, omega, theta) ==
                      doctest::Approx(9.5).epsilon(1e-9));
                ++checked;
            }
        CHECK(checked > 50);
    }
}

TEST_CASE("grid evaluation matches pointwise calls") {
    std::mt19937 rng(59);
    const ArrayGeometry geom = ArrayGeometry::uniform(5, 0.04, 8000.0, 340.0);
    const FilterBank x = random_bank(5, 8, rng);
    Eigen::VectorXd omegas(4), thetas(5);
    omegas << 0.5, 1.0, 1.8, 2.5;
    thetas << 0.1, 0.7, kPi / 2.0, 2.2, 3.0;
    const GridEvaluation ev = evaluate_grid(geom, x, omegas, thetas);
    for (int m = 0; m < 4; ++m)
        for (int k = 0; k < 5; ++k) {
            const Complex want = response(geom, x, omegas[m], thetas[k]);
            CHECK(std::abs(ev.response(m, k) - want) < 1e-11);
            if (ev.delay_valid(m, k))
                CHECK(ev.group_delay(m, k) ==
                      doctest::Approx(group_delay(geom, x, omegas[m], thetas[k]))
                          .epsilon(1e-9));
        }
}
