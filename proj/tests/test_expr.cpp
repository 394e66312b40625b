#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ekwave/errors.hpp>
#include <ekwave/expr.hpp>
#include <set>
#include <string>

using ekwave::expression;
using ekwave::param_map;

TEST_CASE("arithmetic and precedence") {
    CHECK(expression::parse("-v + v^2").eval(2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(expression::parse("2*v^3").eval(2.0) == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(expression::parse("-v^2").eval(2.0) == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(expression::parse("(1+2)*4").eval(0.0) == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(expression::parse("1/v^2").eval(2.0) == doctest::Approx(0.25).epsilon(1e-15));
    // '^' is right-associative
    CHECK(expression::parse("2^3^2").eval(0.0) == doctest::Approx(512.0).epsilon(1e-15));
    CHECK(expression::parse("6 - 2 - 1").eval(0.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(expression::parse("12/3/2").eval(0.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("parameters") {
    const auto e = expression::parse("alpha/v^2 - beta/v^3");
    const param_map params{{"alpha", 1.0}, {"beta", 1.0}};
    CHECK(e.eval(2.0, params) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(e.referenced_params() == std::set<std::string>{"alpha", "beta"});
    CHECK(expression::parse("v^2").referenced_params().empty());
    // missing parameter at evaluation time
    CHECK_THROWS_AS(e.eval(2.0, param_map{{"alpha", 1.0}}), ekwave::ek_error);
}

TEST_CASE("derivatives") {
    CHECK(expression::parse("v^3").derivative().eval(2.0) ==
          doctest::Approx(12.0).epsilon(1e-14));
    // d/dv 1/(4 v^4) = -1/v^5
    CHECK(expression::parse("1/(4*v^4)").derivative().eval(2.0) ==
          doctest::Approx(-1.0 / 32.0).epsilon(1e-14));
    const param_map gp{{"alpha", 1.0}, {"beta", 1.0}};
    CHECK(expression::parse("alpha/v^2 - beta/v^3").derivative().eval(2.0, gp) ==
          doctest::Approx(-1.0 / 16.0).epsilon(1e-14));
    CHECK(expression::parse("7").derivative().eval(3.0) == 0.0);
    // exponents must not depend on v
    CHECK_THROWS_AS(expression::parse("2^v").derivative(), ekwave::ek_error);
}

TEST_CASE("parse errors carry offsets") {
    CHECK_THROWS_AS(expression::parse("v + "), ekwave::parse_error);
    try {
        expression::parse("v + ");
        FAIL("expected parse_error");
    } catch (const ekwave::parse_error& e) {
        CHECK(e.offset == 4);
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
    CHECK_THROWS_AS(expression::parse(")("), ekwave::parse_error);
    CHECK_THROWS_AS(expression::parse("1 + * 2"), ekwave::parse_error);
    CHECK_THROWS_AS(expression::parse("v 2"), ekwave::parse_error);
    CHECK_THROWS_AS(expression::parse("(v"), ekwave::parse_error);
    CHECK_THROWS_AS(expression::parse(""), ekwave::parse_error);
}

TEST_CASE("construction helpers") {
    CHECK(expression::constant(3.5).eval(99.0) == 3.5);
    CHECK(expression().eval(1.0) == 0.0);
    // round-trip: to_string() must re-parse to the same values
    const auto e = expression::parse("-v + v^2");
    const auto r = expression::parse(e.to_string());
    for (double v : {-1.5, 0.0, 0.3, 2.0})
        CHECK(r.eval(v) == doctest::Approx(e.eval(v)).epsilon(1e-15));
}
