// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "bfdesign/geometry.hpp"

using namespace bfd;

TEST_CASE("uniform geometry is centered and symmetric") {
    const ArrayGeometry geom = ArrayGeometry::uniform(7, 0.04, 8000.0, 340.0);
    CHECK(geom.num_elements() == 7);
    CHECK(geom.position(3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(geom.position(0) == doctest::Approx(-0.12));
    CHECK(geom.position(6) == doctest::Approx(0.12));
    CHECK(geom.is_symmetric());
}

TEST_CASE("asymmetric positions are detected") {
    const ArrayGeometry geom({-0.1, 0.0, 0.11}, 8000.0, 340.0);
    CHECK_FALSE(geom.is_symmetric());
}

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(ArrayGeometry({0.0}, 8000.0, 340.0), DimensionMismatch);
    CHECK_THROWS_AS(ArrayGeometry({0.1, 0.0}, 8000.0, 340.0), DimensionMismatch);
    CHECK_THROWS_AS(ArrayGeometry({0.0, 0.1}, -1.0, 340.0), DimensionMismatch);
    CHECK_THROWS_AS(ArrayGeometry({0.0, 0.1}, 8000.0, 0.0), DimensionMismatch);
}

TEST_CASE("filter bank flattening round-trips exactly in channel-major order") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    FilterBank bank(5, 8);
    for (int n = 0; n < 5; ++n)
        for (int l = 0; l < 8; ++l) bank(n, l) = dist(rng);

    const Eigen::VectorXd flat = bank.flatten();
    REQUIRE(flat.size() == 40);
    for (int n = 0; n < 5; ++n)
        for (int l = 0; l < 8; ++l) CHECK(flat[n * 8 + l] == bank(n, l));

    const FilterBank back = FilterBank::from_flat(flat, 5, 8);
    CHECK((back.coeffs() - bank.coeffs()).cwiseAbs().maxCoeff() == 0.0);
}
