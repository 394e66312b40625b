#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <ekwave/errors.hpp>
#include <ekwave/model.hpp>
#include <fstream>
#include <string>

using namespace ekwave;

TEST_CASE("bona-sachs family") {
    const model m = model::bona_sachs(2);
    CHECK(m.name() == "bona-sachs");
    CHECK(m.kind() == model_kind::bona_sachs);
    CHECK(m.p(2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(m.p_prime(2.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(m.kappa(5.0) == 1.0);
    CHECK(m.kappa_prime(5.0) == 0.0);
    CHECK(m.antiderivative_diff(1.0, 0.0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(m.p_formula() == "-v + v^2");
    CHECK(m.kappa_formula() == "1");
    CHECK(m.domain().contains(-100.0));
    CHECK(m.domain().contains(100.0));

    const model m3 = model::bona_sachs(3);
    CHECK(m3.p(2.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(m3.antiderivative_diff(1.0, 0.0) == doctest::Approx(-0.25).epsilon(1e-15));

    CHECK_THROWS_AS(model::bona_sachs(1), config_error);
    CHECK_THROWS_AS(model::bona_sachs(-2), config_error);
}

TEST_CASE("gross-pitaevskii family") {
    const model m = model::gross_pitaevskii(1.0, 1.0);
    CHECK(m.name() == "gross-pitaevskii");
    CHECK(m.p(2.0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(m.p_prime(2.0) == doctest::Approx(-1.0 / 16.0).epsilon(1e-15));
    CHECK(m.kappa(2.0) == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
    CHECK(m.kappa_prime(2.0) == doctest::Approx(-1.0 / 32.0).epsilon(1e-15));
    CHECK(m.antiderivative_diff(1.0, 2.0) == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK(m.p_formula() == "1/v^2 - 1/v^3");
    CHECK(m.kappa_formula() == "1/(4*v^4)");
    // domain is (0, inf), open at 0
    CHECK(!m.domain().contains(0.0));
    CHECK(!m.domain().contains(-1.0));
    CHECK(m.domain().contains(1e-6));

    CHECK_THROWS_AS(model::gross_pitaevskii(0.0, 1.0), config_error);
    CHECK_THROWS_AS(model::gross_pitaevskii(1.0, -1.0), config_error);
}

TEST_CASE("user-defined models") {
    const model m = model::user_defined("-v + v^3", "1", {});
    CHECK(m.name() == "user-defined");
    CHECK(m.p(2.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(m.p_prime(2.0) == doctest::Approx(11.0).epsilon(1e-14));
    // antiderivative falls back to quadrature: P(v) = -v^2/2 + v^4/4
    CHECK(m.antiderivative_diff(1.0, 0.0) == doctest::Approx(-0.25).epsilon(1e-12));
    // memoization must not change values on repeat calls
    CHECK(m.antiderivative_diff(1.0, 0.0) == doctest::Approx(-0.25).epsilon(1e-12));

    const model gp = model::user_defined("alpha/v^2 - beta/v^3", "1/(4*v^4)",
                                         {{"alpha", 1.0}, {"beta", 1.0}});
    const model builtin = model::gross_pitaevskii(1.0, 1.0);
    for (double v : {0.7, 1.0, 1.8, 2.5}) {
        CHECK(gp.p(v) == doctest::Approx(builtin.p(v)).epsilon(1e-14));
        CHECK(gp.kappa(v) == doctest::Approx(builtin.kappa(v)).epsilon(1e-14));
        CHECK(gp.kappa_prime(v) == doctest::Approx(builtin.kappa_prime(v)).epsilon(1e-13));
    }

    // missing / non-positive parameters are rejected up front
    CHECK_THROWS_AS(model::user_defined("a*v", "1", {}), config_error);
    CHECK_THROWS_AS(model::user_defined("a*v", "1", {{"a", -2.0}}), config_error);
    // kappa must stay positive wherever it is evaluated
    const model bad = model::user_defined("-v", "v", {});
    CHECK_THROWS_AS(bad.kappa(-1.0), domain_error);
    CHECK_THROWS_AS(bad.kappa(0.0), domain_error);
}

TEST_CASE("selector parsing") {
    CHECK(model::from_selector("bona-sachs:q=3").p(2.0) == doctest::Approx(6.0));
    CHECK(model::from_selector("bona-sachs").p(2.0) == doctest::Approx(2.0));  // q defaults to 2
    const model gp = model::from_selector("gross-pitaevskii:alpha=2,beta=0.5");
    CHECK(gp.p(1.0) == doctest::Approx(1.5).epsilon(1e-15));

    CHECK_THROWS_AS(model::from_selector("kdv:q=2"), config_error);
    CHECK_THROWS_AS(model::from_selector("bona-sachs:q=2.5"), config_error);
    CHECK_THROWS_AS(model::from_selector("bona-sachs:q"), config_error);
    CHECK_THROWS_AS(model::from_selector("bona-sachs:q=abc"), config_error);
    CHECK_THROWS_AS(model::from_selector("gross-pitaevskii:alpha=1,gamma=2"), config_error);
}

TEST_CASE("model files") {
    const std::string path = "tmp_model_gp.model";
    {
        std::ofstream out(path);
        out << "# capillarity model with singular pressure\n"
            << "p = alpha/v^2 - beta/v^3   # pressure law\n"
            << "kappa = 1/(4*v^4)\n"
            << "params.alpha = 1\n"
            << "params.beta = 1\n";
    }
    const model m = model::from_file(path);
    const model builtin = model::gross_pitaevskii(1.0, 1.0);
    for (double v : {0.8, 1.3, 2.0})
        CHECK(m.p(v) == doctest::Approx(builtin.p(v)).epsilon(1e-14));

    {
        std::ofstream out("tmp_model_bad1.model");
        out << "p = -v + v^2\n";  // kappa missing
    }
    CHECK_THROWS_AS(model::from_file("tmp_model_bad1.model"), config_error);
    {
        std::ofstream out("tmp_model_bad2.model");
        out << "p = -v + v^2\nkappa = 1\njunk line\n";
    }
    CHECK_THROWS_AS(model::from_file("tmp_model_bad2.model"), config_error);
    {
        std::ofstream out("tmp_model_bad3.model");
        out << "p = -v + *v^2\nkappa = 1\n";
    }
    CHECK_THROWS_AS(model::from_file("tmp_model_bad3.model"), config_error);
    CHECK_THROWS_AS(model::from_file("no_such_file.model"), config_error);

    std::remove(path.c_str());
    std::remove("tmp_model_bad1.model");
    std::remove("tmp_model_bad2.model");
    std::remove("tmp_model_bad3.model");
}

TEST_CASE("effective potential") {
    const model m = model::gross_pitaevskii(1.0, 1.0);
    wave_parameters params;
    params.v_star = 2.0;
    params.c = 0.0;

    // exact double root at v*
    auto at_star = potential(m, params, 2.0);
    CHECK(at_star.F == 0.0);
    CHECK(at_star.F_v == 0.0);
    CHECK(at_star.F_c == 0.0);

    CHECK(potential(m, params, 1.5).F == doctest::Approx(-1.0 / 144.0).epsilon(1e-13));

    params.c = 0.3;
    auto pv = potential(m, params, 1.0);
    CHECK(pv.F_c == doctest::Approx(0.3).epsilon(1e-15));  // c (v - v*)^2
    // F_v = p(v) - p(v*) + c^2 (v - v*)
    CHECK(pv.F_v ==
          doctest::Approx(m.p(1.0) - m.p(2.0) + 0.09 * (1.0 - 2.0)).epsilon(1e-14));

    const model bs = model::bona_sachs(2);
    wave_parameters bw;  // v* = 0, c = 0.5
    bw.c = 0.5;
    // F(v) = v^2/2 (c^2 - 1) + v^3/3 for q = 2, v* = 0
    for (double v : {0.4, 0.9, 1.1})
        CHECK(potential(bs, bw, v).F ==
              doctest::Approx(0.5 * v * v * (0.25 - 1.0) + v * v * v / 3.0).epsilon(1e-13));
}
