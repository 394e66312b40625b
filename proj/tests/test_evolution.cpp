#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <ekwave/errors.hpp>
#include <ekwave/evolution.hpp>
#include <vector>

#include "oracles.hpp"

using namespace ekwave;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s = std::max(s, std::abs(a[j] - b[j]));
    return s;
}

double max_abs(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
}

double fit_slope(const std::vector<diagnostics_row>& rows) {
    double tbar = 0.0, sbar = 0.0;
    for (const auto& r : rows) {
        tbar += r.t;
        sbar += r.shift;
    }
    tbar /= rows.size();
    sbar /= rows.size();
    double num = 0.0, den = 0.0;
    for (const auto& r : rows) {
        num += (r.t - tbar) * (r.shift - sbar);
        den += (r.t - tbar) * (r.t - tbar);
    }
    return num / den;
}

}  // namespace

TEST_CASE("spectral grid") {
    CHECK_THROWS_AS(spectral_grid(10.0, 12), config_error);
    CHECK_THROWS_AS(spectral_grid(10.0, 4), config_error);
    CHECK_THROWS_AS(spectral_grid(0.0, 64), config_error);

    spectral_grid g(20.0, 64);
    CHECK(g.size() == 64);
    CHECK(g.modes() == 33);
    CHECK(g.dy() == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(g.node(0) == -20.0);
    CHECK(g.node(32) == doctest::Approx(0.0));
    CHECK(g.wavenumber(1) == doctest::Approx(oracle::frozen::pi / 20.0).epsilon(1e-15));

    const double k1 = oracle::frozen::pi / 20.0;
    std::vector<double> f(64), fp(64);
    for (int j = 0; j < 64; ++j) {
        const double y = g.node(j);
        f[j] = std::sin(k1 * y) + 0.3 * std::cos(3.0 * k1 * y);
        fp[j] = k1 * std::cos(k1 * y) - 0.9 * k1 * std::sin(3.0 * k1 * y);
    }

    std::vector<std::complex<double>> fh;
    std::vector<double> back;
    g.forward(f, fh);
    g.inverse(fh, back);
    CHECK(sup_diff(f, back) < 1e-14);

    std::vector<double> d;
    g.derivative(f, d);
    CHECK(sup_diff(d, fp) < 1e-12);

    // rfft normalization: constant field puts n into the DC bin
    std::vector<double> ones(64, 1.0);
    g.forward(ones, fh);
    CHECK(fh[0].real() == doctest::Approx(64.0).epsilon(1e-14));
    CHECK(std::abs(fh[5]) < 1e-12);

    // 2/3 rule: indices above n/3 = 21 are zeroed
    std::vector<std::complex<double>> spec(33, std::complex<double>(1.0, 1.0));
    g.dealias(spec);
    CHECK(spec[21] == std::complex<double>(1.0, 1.0));
    CHECK(spec[22] == std::complex<double>(0.0, 0.0));
    CHECK(std::abs(spec[32]) == 0.0);
}

TEST_CASE("right-hand side") {
    const model m = model::bona_sachs(2);
    wave_parameters params;  // v* = 0, u* = 0

    // constant base state is an exact equilibrium
    evolver ev(m, params, 20.0, 64);
    std::vector<double> V(64, 0.0), U(64, 0.0), Vt, Ut;
    ev.rhs(V, U, Vt, Ut);
    CHECK(max_abs(Vt) < 1e-15);
    CHECK(max_abs(Ut) < 1e-15);

    // standing wave: stationary down to the periodization floor -- the
    // L = 40 window cuts the tail at ~6 e^{-20} ~ 1e-8, leaving a v' seam
    // jump of that size that the spectral residual cannot beat
    const profile prof = reconstruct_profile(m, params);
    evolver ev2(m, params, 40.0, 1024);
    auto ps = periodize(prof, 40.0, 1024);
    ev2.rhs(ps.state.V, ps.state.U, Vt, Ut);
    CHECK(max_abs(Vt) < 1e-10);
    CHECK(max_abs(Ut) < 3e-8);

    // traveling wave: time derivative equals -c * spatial derivative
    wave_parameters moving;
    moving.c = 0.3;
    const profile mp = reconstruct_profile(m, moving);
    auto msj = periodize(mp, 40.0, 1024);
    evolver ev3(m, moving, 40.0, 1024);
    ev3.rhs(msj.state.V, msj.state.U, Vt, Ut);
    std::vector<double> Vy, Uy;
    ev3.grid().derivative(msj.state.V, Vy);
    ev3.grid().derivative(msj.state.U, Uy);
    double rv = 0.0, ru = 0.0;
    for (int j = 0; j < 1024; ++j) {
        rv = std::max(rv, std::abs(Vt[j] + 0.3 * Vy[j]));
        ru = std::max(ru, std::abs(Ut[j] + 0.3 * Uy[j]));
    }
    CHECK(rv < 1e-12);
    CHECK(ru < 3e-8);  // same seam floor as the standing case
}

TEST_CASE("rk4 step and convergence order") {
    const model m = model::bona_sachs(2);
    wave_parameters params;
    evolver ev(m, params, 40.0, 128);

    // constant state advances exactly
    evolution_state st;
    st.V.assign(128, 0.0);
    st.U.assign(128, 0.0);
    ev.step_rk4(st, 0.01);
    CHECK(st.t == 0.01);
    CHECK(max_abs(st.V) == 0.0);
    CHECK(max_abs(st.U) == 0.0);

    // global error on a perturbed standing wave scales like h^4
    const profile prof = reconstruct_profile(m, params);
    auto ps = periodize(prof, 40.0, 128);
    const auto bump = gaussian_bump(ev.grid(), 1e-3, 5.0, 2.0);
    for (int j = 0; j < 128; ++j) ps.state.V[j] += bump[j];

    const double h0 = ev.dt_rule(ev.kappa_max(ps.state.V));
    auto advance = [&](int steps, double h) {
        evolution_state s = ps.state;
        for (int i = 0; i < steps; ++i) ev.step_rk4(s, h);
        return s;
    };
    const auto s1 = advance(50, h0);
    const auto s2 = advance(100, 0.5 * h0);
    const auto s3 = advance(400, 0.125 * h0);
    const double e1 = std::max(sup_diff(s1.V, s3.V), sup_diff(s1.U, s3.U));
    const double e2 = std::max(sup_diff(s2.V, s3.V), sup_diff(s2.U, s3.U));
    CHECK(e2 < e1);
    const double ratio = e1 / e2;
    CHECK(ratio > 12.8);
    CHECK(ratio < 19.2);
}

TEST_CASE("conserved quantities") {
    const model m = model::bona_sachs(2);
    wave_parameters params;
    evolver ev(m, params, 40.0, 512);

    evolution_state flat;
    flat.V.assign(512, 0.0);
    flat.U.assign(512, 0.0);
    const auto z = ev.conserved(flat);
    CHECK(z.mass == 0.0);
    CHECK(z.momentum == 0.0);
    CHECK(z.hamiltonian == 0.0);

    // standing wave: mass = 6, momentum = 0, H = 6/5 in closed form
    const profile prof = reconstruct_profile(m, params);
    auto ps = periodize(prof, 40.0, 512);
    const auto q = ev.conserved(ps.state);
    CHECK(q.mass == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(std::abs(q.momentum) < 1e-12);
    CHECK(q.hamiltonian == doctest::Approx(1.2).epsilon(1e-8));
}

TEST_CASE("periodization") {
    const model m = model::bona_sachs(2);
    wave_parameters params;
    const profile prof = reconstruct_profile(m, params);

    auto ps = periodize(prof, 40.0, 512);
    CHECK(ps.seam_mismatch < 1e-12);
    CHECK(ps.state.V[256] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(std::abs(ps.state.V[0]) < 1e-12);
    CHECK(max_abs(ps.state.U) == 0.0);  // c = 0, u* = 0

    // a 6.7e-3 relative seam cannot pass the default 1e-8 gate
    CHECK_THROWS_AS(periodize(prof, 5.0, 64), config_error);
    auto loose = periodize(prof, 5.0, 64, 0.1);
    CHECK(loose.seam_mismatch > 1e-3);
}

TEST_CASE("gaussian bump") {
    spectral_grid g(20.0, 128);
    const auto b = gaussian_bump(g, 1e-3, 2.5, 1.0);
    REQUIRE(b.size() == 128);
    double sum = 0.0, peak = 0.0;
    int peak_at = 0;
    for (int j = 0; j < 128; ++j) {
        sum += b[j];
        if (b[j] > peak) {
            peak = b[j];
            peak_at = j;
        }
    }
    CHECK(std::abs(sum) < 1e-15);  // exactly mass-free up to roundoff
    CHECK(peak > 0.9e-3);
    CHECK(peak < 1e-3);
    CHECK(std::abs(g.node(peak_at) - 2.5) <= 0.5 * g.dy() + 1e-12);
}

TEST_CASE("orbital distance") {
    const model m = model::bona_sachs(2);
    wave_parameters params;
    const profile prof = reconstruct_profile(m, params);
    auto ps = periodize(prof, 40.0, 512);
    spectral_grid g(40.0, 512);
    const orbital_distance dist(g, ps.state.V, ps.state.U);

    // the reference itself
    const auto self = dist(ps.state.V, ps.state.U);
    CHECK(self.distance < 1e-12);

    // an exact orbit member: reference shifted by a grid-incommensurate sigma
    const double sigma0 = 3.7;
    std::vector<std::complex<double>> vh, uh;
    std::vector<double> V2, U2;
    g.forward(ps.state.V, vh);
    g.forward(ps.state.U, uh);
    for (int mm = 0; mm < g.modes(); ++mm) {
        const double ph = g.wavenumber(mm) * sigma0;
        const std::complex<double> rot(std::cos(ph), std::sin(ph));
        vh[mm] *= rot;
        uh[mm] *= rot;
    }
    g.inverse(vh, V2);
    g.inverse(uh, U2);
    const auto member = dist(V2, U2);
    CHECK(member.distance < 1e-10);
    CHECK(member.shift == doctest::Approx(sigma0).epsilon(1e-9));

    // constant offset on U: d = eps * sqrt(2L)
    std::vector<double> U3 = ps.state.U;
    for (double& x : U3) x += 1e-3;
    const auto off = dist(ps.state.V, U3);
    CHECK(off.distance == doctest::Approx(1e-3 * std::sqrt(80.0)).epsilon(1e-9));

    // invariance under whole-grid circular shifts of the state
    std::vector<double> V4 = ps.state.V, U4 = U3;
    const auto bump = gaussian_bump(g, 5e-4, -4.0, 1.5);
    for (int j = 0; j < 512; ++j) V4[j] += bump[j];
    const auto d1 = dist(V4, U4);
    std::vector<double> V5(512), U5(512);
    for (int j = 0; j < 512; ++j) {
        V5[(j + 137) % 512] = V4[j];
        U5[(j + 137) % 512] = U4[j];
    }
    const auto d2 = dist(V5, U5);
    CHECK(std::abs(d1.distance - d2.distance) < 1e-12 + 1e-9 * d1.distance);
}

TEST_CASE("experiment: unperturbed standing wave") {
    const model m = model::bona_sachs(2);
    wave_parameters params;
    experiment_config cfg;
    cfg.n = 256;
    cfg.T = 2.0;
    cfg.snapshot_times = {0.0, 1.0};

    const auto r = run_instability_experiment(m, params, cfg);
    CHECK(!r.aborted);
    CHECK(r.seam_mismatch < 1e-10);
    CHECK(!r.growth.tracked);
    CHECK(!r.growth.crossing_time.has_value());
    CHECK(r.final_t == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.dt_initial == doctest::Approx(0.5 * (80.0 / 256) * (80.0 / 256) /
                                          (oracle::frozen::pi * oracle::frozen::pi))
                              .epsilon(1e-12));
    REQUIRE(r.rows.size() >= 10);
    CHECK(r.rows.front().t == 0.0);
    CHECK(r.rows.back().t == doctest::Approx(2.0).epsilon(1e-12));

    const double m0 = r.rows.front().mass;
    const double p0 = r.rows.front().momentum;
    const double h0 = r.rows.front().hamiltonian;
    for (const auto& row : r.rows) {
        CHECK(row.orbital_distance < 1e-6);
        CHECK(std::abs(row.mass - m0) / std::max(1.0, std::abs(m0)) < 1e-11);
        CHECK(std::abs(row.momentum - p0) / std::max(1.0, std::abs(p0)) < 1e-11);
        CHECK(std::abs(row.hamiltonian - h0) / std::max(1.0, std::abs(h0)) < 1e-10);
    }

    REQUIRE(r.snapshots.size() == 2);
    CHECK(r.snapshots[0].t == 0.0);
    CHECK(r.snapshots[1].t >= 1.0);
    CHECK(r.snapshots[1].t < 1.0 + 2.0 * r.dt_initial);
    CHECK(r.snapshots[0].y.size() == 256);
    CHECK(r.snapshots[0].V[128] == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("experiment: traveling wave drift and speed") {
    const model m = model::bona_sachs(2);
    wave_parameters params;
    params.c = 0.3;
    experiment_config cfg;
    cfg.n = 256;
    cfg.T = 10.0;

    const auto r = run_instability_experiment(m, params, cfg);
    REQUIRE(!r.aborted);
    const double m0 = r.rows.front().mass;
    const double p0 = r.rows.front().momentum;
    const double h0 = r.rows.front().hamiltonian;
    CHECK(m0 == doctest::Approx(6.0 * std::sqrt(0.91)).epsilon(1e-6));
    CHECK(p0 == doctest::Approx(-0.3 * 6.0 * std::sqrt(0.91)).epsilon(1e-6));
    for (const auto& row : r.rows) {
        CHECK(row.orbital_distance < 1e-5);
        CHECK(std::abs(row.mass - m0) / std::max(1.0, std::abs(m0)) < 1e-10);
        CHECK(std::abs(row.momentum - p0) / std::max(1.0, std::abs(p0)) < 1e-10);
        CHECK(std::abs(row.hamiltonian - h0) / std::max(1.0, std::abs(h0)) < 1e-8);
    }
    // the recovered shift tracks sigma(t) = -c t
    const double speed = -fit_slope(r.rows);
    CHECK(speed == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("experiment: perturbed wave leaves the orbit") {
    const model m = model::bona_sachs(2);
    wave_parameters params;
    experiment_config cfg;
    cfg.n = 256;
    cfg.T = 40.0;
    cfg.perturbation.amplitude = 1e-3;

    const auto r = run_instability_experiment(m, params, cfg);
    CHECK(!r.aborted);
    CHECK(r.growth.tracked);
    CHECK(r.growth.factor == 10.0);
    CHECK(r.growth.d0 > 1e-5);
    REQUIRE(r.growth.crossing_time.has_value());
    CHECK(*r.growth.crossing_time > 0.0);
    CHECK(*r.growth.crossing_time <= 40.0);
    CHECK(r.growth.d_max >= 10.0 * r.growth.d0 * 0.999);
    CHECK(r.growth.t_d_max > 0.0);

    // bitwise determinism of the whole pipeline
    const auto r2 = run_instability_experiment(m, params, cfg);
    CHECK(r2.growth.d0 == r.growth.d0);
    CHECK(r2.growth.d_max == r.growth.d_max);
    REQUIRE(r2.growth.crossing_time.has_value());
    CHECK(*r2.growth.crossing_time == *r.growth.crossing_time);
    CHECK(r2.rows.size() == r.rows.size());
    CHECK(r2.rows.back().orbital_distance == r.rows.back().orbital_distance);
}

TEST_CASE("experiment: oversized dt aborts cleanly") {
    const model m = model::bona_sachs(2);
    wave_parameters params;
    experiment_config cfg;
    cfg.n = 256;
    cfg.T = 10.0;
    const double rule = 0.5 * (80.0 / 256) * (80.0 / 256) /
                        (oracle::frozen::pi * oracle::frozen::pi);
    cfg.dt = 10.0 * rule;

    const auto r = run_instability_experiment(m, params, cfg);
    CHECK(r.aborted);
    CHECK(r.steps <= 100);
    CHECK(!r.abort_reason.empty());
    CHECK(r.last_good_t >= 0.0);
    CHECK(r.last_good_t <= 10.0);
}

TEST_CASE("dt rule and kappa ceiling") {
    const model bs = model::bona_sachs(2);
    wave_parameters params;
    evolver ev(bs, params, 40.0, 1024);
    const double dy = 80.0 / 1024;
    CHECK(ev.dt_rule(1.0) == doctest::Approx(0.5 * dy * dy /
                                             (oracle::frozen::pi * oracle::frozen::pi))
                                 .epsilon(1e-14));
    CHECK(ev.dt_rule(4.0, 0.25) ==
          doctest::Approx(0.25 * dy * dy / (oracle::frozen::pi * oracle::frozen::pi) / 2.0)
              .epsilon(1e-14));
    std::vector<double> V(1024, 0.0);
    CHECK(ev.kappa_max(V) == 1.0);

    const model gp = model::gross_pitaevskii(1.0, 1.0);
    wave_parameters gpp;
    gpp.v_star = 2.0;
    evolver gev(gp, gpp, 40.0, 1024);
    std::vector<double> W(1024, 2.0);
    CHECK(gev.kappa_max(W) == doctest::Approx(1.0 / 64.0).epsilon(1e-14));
    W[100] = 1.0;
    CHECK(gev.kappa_max(W) == doctest::Approx(0.25).epsilon(1e-14));
}
