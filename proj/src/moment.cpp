#include "ekwave/moment.hpp"

#include <cmath>

#include "ekwave/quadrature.hpp"

namespace ekwave {

const char* to_string(stability_verdict v) {
    switch (v) {
        case stability_verdict::unstable_standing: return "UnstableStanding";
        case stability_verdict::unstable_nonconvex: return "UnstableNonconvex";
        case stability_verdict::inconclusive: return "CriterionInconclusive";
    }
    return "?";
}

const char* to_string(analysis_status s) {
    switch (s) {
        case analysis_status::ok: return "Ok";
        case analysis_status::no_solitary_wave: return "NoSolitaryWave";
        case analysis_status::sonic_degenerate: return "SonicDegenerate";
    }
    return "?";
}

verdict_call stability_call(double c, double m_second, double tol) {
    verdict_call vc;
    vc.near_zero_second = std::abs(m_second) < tol;
    if (c == 0.0) {
        vc.verdict = stability_verdict::unstable_standing;
        vc.theorem_inconsistency = !(m_second < -tol);
    } else if (m_second < -tol) {
        vc.verdict = stability_verdict::unstable_nonconvex;
    } else {
        vc.verdict = stability_verdict::inconclusive;
    }
    return vc;
}

// ============================================================
// w-substitution integrands: v = v_m -/+ w^2 toward v_star
// ============================================================

namespace {

struct w_frame {
    const model& m;
    const wave_parameters& params;
    double v_m;
    double dirs;  // +1 elevation, -1 depression
    double W;     // sqrt(|v_m - v_star|)
    double v_m_prime;
    double amp;   // |v_m - v_star| = W^2

    double v_of(double w) const { return v_m - dirs * w * w; }

    // -2F(v(w)) via the endpoint-safe forms within 5% of either end
    double minus2F(double w) const {
        const double w2 = w * w;
        if (w2 < 0.0025 * amp) return minus_two_F_near_vm(m, params, v_m, dirs * w2);
        const double d = amp - w2;
        if (d < 0.05 * amp) return minus_two_F_near_vs(m, params, dirs * d);
        return std::max(-2.0 * potential(m, params, v_of(w)).F, 0.0);
    }
};

w_frame make_frame(const model& m, const wave_parameters& params, const turning_point& tp) {
    const double dirs = (tp.direction == wave_direction::elevation) ? 1.0 : -1.0;
    const double amp = std::abs(tp.v_m - params.v_star);
    return {m, params, tp.v_m, dirs, std::sqrt(amp), tp.v_m_prime, amp};
}

// kappa v'^2 dxi contribution: 4 sqrt(kappa) sqrt(-2F) w
double moment_integrand(const w_frame& fr, double w) {
    const double m2F = fr.minus2F(w);
    if (m2F <= 0.0) return 0.0;
    return 4.0 * std::sqrt(fr.m.kappa(fr.v_of(w))) * std::sqrt(m2F) * w;
}

// -4 sqrt(kappa) F_c / sqrt(-2F) w
double moment_prime_integrand(const w_frame& fr, double w) {
    const double m2F = fr.minus2F(w);
    if (m2F <= 0.0) return 0.0;
    const double v = fr.v_of(w);
    const double dv = v - fr.params.v_star;
    const double F_c = fr.params.c * dv * dv;
    return -4.0 * std::sqrt(fr.m.kappa(v)) * F_c / std::sqrt(m2F) * w;
}

second_derivative_integrand second_integrand(const w_frame& fr, double w) {
    second_derivative_integrand s;
    s.w = w;
    const double c = fr.params.c;
    const double vs = fr.params.v_star;
    const double w2 = w * w;

    if (w2 < 0.0025 * fr.amp) {
        // Near the turning point both F and F_v v_m' + F_c vanish; rebuild
        // them from the exact offset delta = v - v_m = -dirs w^2 so the
        // numerator keeps full relative accuracy. The identity
        // F_v(v_m) v_m' + F_c(v_m) = 0 turns the bracket into
        //   Y = v_m' [F_v(v) - F_v(v_m)] + c delta (v + v_m - 2 v_*)
        // with F_v(v) - F_v(v_m) = int_{v_m}^{v} (p' + c^2) ds.
        const double delta = -fr.dirs * w2;
        const double v = fr.v_m + delta;
        const double dv = fr.dirs * (fr.amp - w2);  // v - v_star
        const double kap = fr.m.kappa(v);
        const double G = minus_two_F_near_vm(fr.m, fr.params, fr.v_m, fr.dirs * w2);
        const double F = -0.5 * G;
        const double F_c = c * dv * dv;
        double dF_v = 0.0;
        {
            const auto& r4 = quadrature::gauss_legendre(4);
            const double half = 0.5 * delta;
            const double mid = fr.v_m + half;
            for (std::size_t i = 0; i < r4.nodes.size(); ++i)
                dF_v += r4.weights[i] * (fr.m.p_prime(mid + half * r4.nodes[i]) + c * c);
            dF_v *= half;
        }
        const double Y = fr.v_m_prime * dF_v + c * delta * (dv + fr.dirs * fr.amp);
        s.A = F * fr.m.kappa_prime(v) * fr.v_m_prime * F_c;
        s.B = kap * (dv * (2.0 * F * (dv + 2.0 * c * fr.v_m_prime) - c * dv * Y));
        if (G > 0.0)
            s.combined = 2.0 * w * (s.A + s.B) / (std::sqrt(kap) * G * std::sqrt(G));
        return s;
    }

    const double v = fr.v_of(w);
    const auto pv = potential(fr.m, fr.params, v);
    const double dv = v - vs;
    const double kap = fr.m.kappa(v);
    const double G = fr.minus2F(w);
    // in the base zone F itself must come from the safe form too
    const double F = (fr.amp - w2 < 0.05 * fr.amp) ? -0.5 * G : pv.F;

    s.A = F * fr.m.kappa_prime(v) * fr.v_m_prime * pv.F_c;
    s.B = kap * (dv * (2.0 * F * (dv + 2.0 * c * fr.v_m_prime) -
                       c * dv * (pv.F_v * fr.v_m_prime + pv.F_c)));

    if (G > 0.0) s.combined = 2.0 * w * (s.A + s.B) / (std::sqrt(kap) * G * std::sqrt(G));
    return s;
}

// One-sided Richardson pair for the removable endpoint limits of the m''
// integrand; the integrand is linear in the offset to leading order.
struct endpoint_limit {
    double value;
    bool large_error;
};

template <class F>
endpoint_limit richardson_endpoint(F&& f, double w0, double toward, double eps,
                                   double scale_floor) {
    const double f1 = f(w0 + toward * eps);
    const double f2 = f(w0 + toward * 2.0 * eps);
    const double f4 = f(w0 + toward * 4.0 * eps);
    const double L1 = 2.0 * f1 - f2;
    const double L2 = 2.0 * f2 - f4;
    // "relative" is anchored to the quantity the flag protects: a vanishing
    // endpoint limit leaves only O(eps^2) truncation residue in L1, L2, which
    // says nothing about the accuracy of m'' itself
    const double scale = std::max({std::abs(L1), std::abs(L2), std::abs(f1),
                                   std::abs(scale_floor), 1e-30});
    return {L1, std::abs(L1 - L2) / scale > 1e-6};
}

}  // namespace

// ============================================================
// Public moment functions
// ============================================================

double moment(const model& m, const wave_parameters& params, const turning_point& tp,
              const moment_tolerances& tol) {
    const w_frame fr = make_frame(m, params, tp);
    return quadrature::integrate_dyadic([&](double w) { return moment_integrand(fr, w); },
                                        0.0, fr.W, tol.quad_abs_tol)
        .value;
}

double moment(const model& m, const wave_parameters& params, const moment_tolerances& tol) {
    return moment(m, params, find_turning_point(m, params, {}, tol.root_rel_tol), tol);
}

double moment_prime(const model& m, const wave_parameters& params, const turning_point& tp,
                    const moment_tolerances& tol) {
    const w_frame fr = make_frame(m, params, tp);
    return quadrature::integrate_dyadic(
               [&](double w) { return moment_prime_integrand(fr, w); }, 0.0, fr.W,
               tol.quad_abs_tol)
        .value;
}

double moment_prime(const model& m, const wave_parameters& params,
                    const moment_tolerances& tol) {
    return moment_prime(m, params, find_turning_point(m, params, {}, tol.root_rel_tol), tol);
}

second_derivative_integrand moment_second_integrand(const model& m,
                                                    const wave_parameters& params,
                                                    const turning_point& tp, double w) {
    return second_integrand(make_frame(m, params, tp), w);
}

moment_second_result moment_second(const model& m, const wave_parameters& params,
                                   const turning_point& tp, const moment_tolerances& tol) {
    const w_frame fr = make_frame(m, params, tp);
    auto combined = [&](double w) { return second_integrand(fr, w).combined; };

    moment_second_result res;
    const auto qr = quadrature::integrate_dyadic([&](double w) { return 2.0 * combined(w); },
                                                 0.0, fr.W, tol.quad_abs_tol);
    res.value = qr.value;
    res.error_estimate = qr.error_estimate;
    res.converged = qr.converged;

    const double eps = 1e-6 * fr.W;
    const auto lim0 = richardson_endpoint(combined, 0.0, +1.0, eps, res.value);
    const auto limW = richardson_endpoint(combined, fr.W, -1.0, eps, res.value);
    res.at_turning = second_integrand(fr, 0.0);
    res.at_turning.combined = lim0.value;
    res.at_base = second_integrand(fr, fr.W);
    res.at_base.combined = limW.value;
    res.large_error = lim0.large_error || limW.large_error;
    return res;
}

moment_second_result moment_second(const model& m, const wave_parameters& params,
                                   const moment_tolerances& tol) {
    return moment_second(m, params, find_turning_point(m, params, {}, tol.root_rel_tol), tol);
}

double moment_second_standing(const model& m, double v_star, const moment_tolerances& tol) {
    const wave_parameters params{v_star, 0.0, 0.0};
    const turning_point tp = find_turning_point(m, params, {}, tol.root_rel_tol);
    const w_frame fr = make_frame(m, params, tp);
    auto f = [&](double w) {
        const double m2F = fr.minus2F(w);
        if (m2F <= 0.0) return 0.0;
        const double v = fr.v_of(w);
        const double dv = v - v_star;
        return -4.0 * std::sqrt(m.kappa(v)) * dv * dv / std::sqrt(m2F) * w;
    };
    return quadrature::integrate_dyadic(f, 0.0, fr.W, tol.quad_abs_tol).value;
}

double moment_direct(const profile& p, const model& m) {
    double sum = 0.0;
    double prev = m.kappa(p.v.front()) * p.v_prime.front() * p.v_prime.front();
    for (std::size_t j = 1; j < p.xi.size(); ++j) {
        const double cur = m.kappa(p.v[j]) * p.v_prime[j] * p.v_prime[j];
        sum += 0.5 * (prev + cur) * (p.xi[j] - p.xi[j - 1]);
        prev = cur;
    }
    // analytic tail beyond the grid: v - v* ~ a e^{-mu(xi - xi_end)} both sides
    const double a_end = std::abs(p.v.back() - p.params.v_star);
    sum += m.kappa(p.params.v_star) * p.decay_rate * a_end * a_end;
    return sum;
}

// ============================================================
// Reports
// ============================================================

moment_report analyze_speed(const model& m, const wave_parameters& params,
                            std::optional<wave_direction> direction,
                            const moment_tolerances& tol) {
    moment_report r;
    r.c = params.c;
    r.v_star = params.v_star;
    r.u_star = params.u_star;

    turning_point tp;
    try {
        tp = find_turning_point(m, params, direction, tol.root_rel_tol);
    } catch (const no_solitary_wave& e) {
        r.status = analysis_status::no_solitary_wave;
        r.status_detail = e.what();
        return r;
    } catch (const sonic_degenerate& e) {
        r.status = analysis_status::sonic_degenerate;
        r.status_detail = e.what();
        return r;
    }

    r.v_m = tp.v_m;
    r.v_m_prime = tp.v_m_prime;
    r.direction = tp.direction;

    const w_frame fr = make_frame(m, params, tp);
    const auto q_m = quadrature::integrate_dyadic(
        [&](double w) { return moment_integrand(fr, w); }, 0.0, fr.W, tol.quad_abs_tol);
    const auto q_mp = quadrature::integrate_dyadic(
        [&](double w) { return moment_prime_integrand(fr, w); }, 0.0, fr.W, tol.quad_abs_tol);
    const auto q_ms = moment_second(m, params, tp, tol);

    r.m = q_m.value;
    r.m_prime = q_mp.value;
    r.m_second = q_ms.value;
    r.errors = {q_m.error_estimate, q_mp.error_estimate, q_ms.error_estimate};
    r.large_error = q_ms.large_error;

    const verdict_call vc = stability_call(params.c, r.m_second);
    r.verdict = vc.verdict;
    r.near_zero_second = vc.near_zero_second;
    r.theorem_inconsistency = vc.theorem_inconsistency;
    return r;
}

std::vector<moment_report> moment_curve(const model& m, double v_star, double u_star,
                                        const std::vector<double>& speeds,
                                        std::optional<wave_direction> direction,
                                        const moment_tolerances& tol) {
    std::vector<moment_report> rows;
    rows.reserve(speeds.size());
    for (double c : speeds)
        rows.push_back(analyze_speed(m, wave_parameters{v_star, u_star, c}, direction, tol));
    return rows;
}

}  // namespace ekwave
