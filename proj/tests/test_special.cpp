#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rspcat/special.hpp"

using namespace rspcat;

TEST_CASE("hermite functions match direct polynomial evaluation") {
    // psi_m(x) = H_m(x) e^{-x^2/2} / sqrt(2^m m! sqrt(pi)), H by coefficients.
    for (double x : {-5.0, -2.3, -0.7, 0.0, 0.4, 1.9, 5.0}) {
        const RealVector psi = hermite_functions(30, x);
        for (int m = 0; m <= 30; ++m) {
            const double ref = oracles::hermite_by_coefficients(m, x) * std::exp(-0.5 * x * x)
                               / std::sqrt(std::exp2(m) * std::exp(std::lgamma(m + 1.0))
                                           * std::sqrt(M_PI));
            if (std::abs(ref) > 1e-280) {
                CHECK(psi[m] == doctest::Approx(ref).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("hermite functions stay finite to very large order") {
    const RealVector psi = hermite_functions(10000, 1.3);
    for (int m = 0; m <= 10000; ++m) {
        REQUIRE(std::isfinite(psi[m]));
        REQUIRE(std::abs(psi[m]) < 1.0);
    }
}

TEST_CASE("hermite parity at the origin") {
    const RealVector psi = hermite_functions(41, 0.0);
    for (int m = 1; m <= 41; m += 2) CHECK(psi[m] == 0.0);
    CHECK(psi[0] == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-14));
}

TEST_CASE("laguerre recurrence against closed low-order forms") {
    for (double z : {0.0, 0.3, 2.0, 11.0}) {
        for (int a : {0, 1, 3}) {
            const RealVector L = laguerre_row(4, a, z);
            CHECK(L[0] == doctest::Approx(1.0));
            CHECK(L[1] == doctest::Approx(1.0 + a - z).epsilon(1e-13));
            CHECK(L[2]
                  == doctest::Approx(0.5 * (z * z - 2.0 * (a + 2.0) * z + (a + 1.0) * (a + 2.0)))
                         .epsilon(1e-12));
        }
    }
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const GaussLegendreRule rule = gauss_legendre(8);
    CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for degree <= 15.
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], 14);
    CHECK(acc == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("adaptive integration of a gaussian") {
    const double v = integrate_adaptive([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(v == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}
