#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <ekwave/quadrature.hpp>

#include "oracles.hpp"

using namespace ekwave::quadrature;

TEST_CASE("gauss-legendre rules") {
    const auto& r = gauss_legendre(32);
    REQUIRE(r.nodes.size() == 32);
    REQUIRE(r.weights.size() == 32);
    double wsum = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
        CHECK(r.weights[i] > 0.0);
        wsum += r.weights[i];
        if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
        CHECK(r.nodes[i] == doctest::Approx(-r.nodes[31 - i]).epsilon(1e-14));
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

    // a rule with n points is exact through degree 2n-1
    const auto& r16 = gauss_legendre(16);
    double even = 0.0, odd = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        even += r16.weights[i] * std::pow(r16.nodes[i], 30);
        odd += r16.weights[i] * std::pow(r16.nodes[i], 31);
    }
    CHECK(even == doctest::Approx(2.0 / 31.0).epsilon(1e-13));
    CHECK(std::abs(odd) < 1e-15);

    const auto& r1 = gauss_legendre(1);
    CHECK(r1.nodes[0] == doctest::Approx(0.0));
    CHECK(r1.weights[0] == doctest::Approx(2.0));

    // cached: repeat lookups hand back identical rules
    CHECK(&gauss_legendre(32) == &r);
}

TEST_CASE("single panel") {
    const auto& r = gauss_legendre(8);
    const double v = gl_panel([](double x) { return x * x; }, 0.0, 1.0, r);
    CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    // orientation: [a,b] with a > b flips sign
    const double w = gl_panel([](double x) { return x * x; }, 1.0, 0.0, r);
    CHECK(w == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("dyadic refinement") {
    auto smooth = integrate_dyadic([](double x) { return std::sin(x); }, 0.0,
                                   3.14159265358979323846);
    CHECK(smooth.converged);
    CHECK(smooth.error_estimate <= 1e-12);
    CHECK(smooth.value == doctest::Approx(2.0).epsilon(1e-13));

    // sqrt has an algebraic endpoint singularity: the dyadic ladder cannot
    // reach 1e-12 within the panel budget, but the value is still accurate
    auto rough = integrate_dyadic([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(!rough.converged);
    CHECK(std::abs(rough.value - 2.0 / 3.0) < 1e-6);

    // a loose tolerance converges immediately
    auto loose = integrate_dyadic([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-4);
    CHECK(loose.converged);
    CHECK(loose.panels <= 8);
}

TEST_CASE("tanh-sinh oracle agrees with closed forms") {
    CHECK(oracle::tanh_sinh([](double x) { return std::sin(x); }, 0.0,
                            3.14159265358979323846) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(oracle::tanh_sinh([](double x) { return std::sqrt(x); }, 0.0, 1.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // endpoint-singular integrand via the distance-aware interface:
    // 1/sqrt(1 - x^2) = 1/sqrt((x + 1)(1 - x))
    CHECK(oracle::tanh_sinh_sing([](double, double da, double db) { return 1.0 / std::sqrt(da * db); },
                                 -1.0, 1.0) == doctest::Approx(oracle::frozen::pi).epsilon(1e-12));

    // cross-validation of the two engines on a generic smooth integrand
    auto f = [](double x) { return std::exp(-x * x); };
    const double de = oracle::tanh_sinh(f, 0.0, 2.0);
    const auto gl = integrate_dyadic(f, 0.0, 2.0);
    CHECK(gl.converged);
    CHECK(de == doctest::Approx(gl.value).epsilon(1e-12));
}
