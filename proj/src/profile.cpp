#include "ekwave/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ekwave/quadrature.hpp"
#include "ekwave/rootfind.hpp"

namespace ekwave {

namespace {

std::string fmt_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

constexpr double k_sonic_tol = 1e-10;

// F evaluation that treats domain violations as "no value" so bracket
// expansion can use singular points as barriers.
std::optional<double> try_F(const model& m, const wave_parameters& params, double v) {
    try {
        double F = potential(m, params, v).F;
        if (!std::isfinite(F)) return std::nullopt;
        return F;
    } catch (const domain_error&) {
        return std::nullopt;
    }
}

// ============================================================
// Quintic Hermite basis on [x0, x1] (function, slope, curvature at both ends)
// ============================================================

void hermite5_eval(double x0, double x1, double f0, double d0, double s0, double f1,
                   double d1, double s1, double x, double* f_out, double* d_out) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;

    const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
    const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double H5 = 0.5 * t3 - t4 + 0.5 * t5;

    *f_out = f0 * H0 + h * d0 * H1 + h * h * s0 * H2 + f1 * H3 + h * d1 * H4 + h * h * s1 * H5;

    if (d_out) {
        const double G0 = -30 * t2 + 60 * t3 - 30 * t4;
        const double G1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
        const double G2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
        const double G3 = 30 * t2 - 60 * t3 + 30 * t4;
        const double G4 = -12 * t2 + 28 * t3 - 15 * t4;
        const double G5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
        *d_out = (f0 * G0 + h * d0 * G1 + h * h * s0 * G2 + f1 * G3 + h * d1 * G4 +
                  h * h * s1 * G5) /
                 h;
    }
}

}  // namespace

// ============================================================
// Existence window
// ============================================================

existence_interval existence_window(const model& m, double v_star) {
    const double dps = m.p_prime(v_star);
    if (dps >= 0.0)
        throw no_solitary_wave("no subsonic window: p'(v_star) = " + fmt_num(dps) +
                               " >= 0 at v_star = " + fmt_num(v_star));
    const double c_max = std::sqrt(-dps);
    return {-c_max, c_max};
}

// ============================================================
// Turning point
// ============================================================

namespace {

// Search for the first zero of F on one side of v_star.  Returns the root, or
// nullopt when F stays negative up to the domain boundary (or a singularity).
std::optional<double> search_side(const model& m, const wave_parameters& params, double dir,
                                  double root_rel_tol) {
    const double vs = params.v_star;
    const double delta0 = 1e-3 * std::max(1.0, std::abs(vs));

    // boundary distance in this direction (may be infinite)
    const double bound =
        dir > 0 ? m.domain().hi - vs : vs - m.domain().lo;

    // step off the double root: need F < 0 at the starting offset
    double off_in = std::min(delta0, 0.25 * bound);
    bool inner_ok = false;
    for (int i = 0; i < 20; ++i) {
        auto F = try_F(m, params, vs + dir * off_in);
        if (F && *F < 0.0) {
            inner_ok = true;
            break;
        }
        off_in *= 0.5;
    }
    if (!inner_ok) return std::nullopt;

    // geometric expansion until F >= 0; singular/boundary offsets shrink the
    // reachable range instead of growing it
    double off_lo = off_in;
    double F_lo = *try_F(m, params, vs + dir * off_lo);
    double reach = std::isfinite(bound) ? bound : std::numeric_limits<double>::infinity();
    double off_hi = 0.0, F_hi = 0.0;
    bool bracketed = false;
    double trial = off_lo;
    for (int i = 0; i < 600 && !bracketed; ++i) {
        trial = std::isfinite(reach) ? std::min(2.0 * trial, trial + 0.5 * (reach - trial))
                                     : 2.0 * trial;
        if (trial <= off_lo * (1.0 + 1e-14)) return std::nullopt;  // pinned at a barrier
        auto F = try_F(m, params, vs + dir * trial);
        if (!F) {
            reach = trial;  // singularity: treat as boundary
            trial = off_lo;
            continue;
        }
        if (*F >= 0.0) {
            off_hi = trial;
            F_hi = *F;
            bracketed = true;
        } else {
            off_lo = trial;
            F_lo = *F;
        }
    }
    if (!bracketed) return std::nullopt;

    auto g = [&](double off) { return potential(m, params, vs + dir * off).F; };

    // Polish; re-bracket if an interior sample turns non-negative first
    // (guards against skipping an earlier zero with coarse expansion steps).
    for (int attempt = 0; attempt < 5; ++attempt) {
        const double off_root = rootfind::solve_bracketed(g, off_lo, off_hi, F_lo, F_hi,
                                                          root_rel_tol);
        bool clean = true;
        for (int j = 1; j < 32; ++j) {
            const double frac = static_cast<double>(j) / 32.0;
            const double off_mid = off_in + frac * (off_root * (1.0 - 1e-9) - off_in);
            auto F = try_F(m, params, vs + dir * off_mid);
            if (F && *F >= 0.0) {
                off_hi = off_mid;
                F_hi = *F;
                clean = false;
                break;
            }
        }
        if (clean) return vs + dir * off_root;
    }
    return vs + dir * 0.5 * (off_lo + off_hi);
}

}  // namespace

turning_point find_turning_point(const model& m, const wave_parameters& params,
                                 std::optional<wave_direction> requested,
                                 double root_rel_tol) {
    const double vs = params.v_star;
    const double c = params.c;
    const double F_vv_star = m.p_prime(vs) + c * c;
    if (std::abs(F_vv_star) <= k_sonic_tol)
        throw sonic_degenerate("F_vv(v_star, c) = " + fmt_num(F_vv_star) +
                               " ~ 0: speed at the edge of the subsonic window");
    if (F_vv_star > 0.0)
        throw no_solitary_wave("speed outside subsonic window: c^2 >= -p'(v_star) (c = " +
                               fmt_num(c) + ", p'(v_star) = " + fmt_num(m.p_prime(vs)) + ")");

    auto elevation_root = search_side(m, params, +1.0, root_rel_tol);
    auto depression_root = search_side(m, params, -1.0, root_rel_tol);

    turning_point tp;
    tp.both_directions = elevation_root.has_value() && depression_root.has_value();

    std::optional<double> root;
    if (requested) {
        tp.direction = *requested;
        root = (*requested == wave_direction::elevation) ? elevation_root : depression_root;
        if (!root)
            throw no_solitary_wave(
                std::string("no ") +
                (*requested == wave_direction::elevation ? "elevation" : "depression") +
                " solitary wave at c = " + fmt_num(c));
    } else if (elevation_root && depression_root) {
        // both sides admit a wave: default to the nearest root (the
        // small-amplitude branch); exact tie goes to elevation
        const double de = *elevation_root - vs;
        const double dd = vs - *depression_root;
        tp.direction = (dd < de) ? wave_direction::depression : wave_direction::elevation;
        root = (dd < de) ? depression_root : elevation_root;
    } else if (elevation_root) {
        tp.direction = wave_direction::elevation;
        root = elevation_root;
    } else if (depression_root) {
        tp.direction = wave_direction::depression;
        root = depression_root;
    } else {
        throw no_solitary_wave("F(., c) returns to zero on neither side of v_star (c = " +
                               fmt_num(c) + ")");
    }

    tp.v_m = *root;
    const auto pv = potential(m, params, tp.v_m);
    tp.F_v_at_vm = pv.F_v;
    if (std::abs(tp.F_v_at_vm) <= k_sonic_tol)
        throw sonic_degenerate("turning point at v_m = " + fmt_num(tp.v_m) +
                               " is not a simple zero (F_v = " + fmt_num(tp.F_v_at_vm) + ")");
    tp.v_m_prime = -pv.F_c / tp.F_v_at_vm;
    return tp;
}

// ============================================================
// Endpoint-safe effective potential
// ============================================================

// Gauss panels with the half-length taken from the exact offset; the node
// positions themselves may wobble by an ulp of v_m, which is harmless since
// the integrands below are smooth and O(1).

double minus_two_F_near_vm(const model& m, const wave_parameters& params, double v_m,
                           double delta_m) {
    if (delta_m == 0.0) return 0.0;
    const auto& rule = quadrature::gauss_legendre(8);
    const double half = 0.5 * delta_m;
    const double mid = v_m - half;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * potential(m, params, mid + half * rule.nodes[i]).F_v;
    return std::max(2.0 * acc * half, 0.0);
}

double minus_two_F_near_vs(const model& m, const wave_parameters& params, double delta_s) {
    if (delta_s == 0.0) return 0.0;
    const auto& rule = quadrature::gauss_legendre(8);
    const double p_star = m.p(params.v_star);
    const double half = 0.5 * delta_s;
    const double mid = params.v_star + half;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * (m.p(mid + half * rule.nodes[i]) - p_star);
    const double F = acc * half + 0.5 * params.c * params.c * delta_s * delta_s;
    return std::max(-2.0 * F, 0.0);
}

// ============================================================
// Profile reconstruction
// ============================================================

profile reconstruct_profile(const model& m, const wave_parameters& params,
                            const profile_options& options) {
    const turning_point tp = find_turning_point(m, params, options.direction,
                                                options.root_rel_tol);
    const double vs = params.v_star;
    const double dirs = (tp.direction == wave_direction::elevation) ? 1.0 : -1.0;
    const double amp = std::abs(tp.v_m - vs);

    profile prof;
    prof.params = params;
    prof.direction = tp.direction;
    prof.v_m = tp.v_m;

    const double kappa_star = m.kappa(vs);
    const double F_vv_star = m.p_prime(vs) + params.c * params.c;
    prof.decay_rate = std::sqrt(-F_vv_star / kappa_star);

    // -2F with region-aware endpoint handling; parameterized by w (distance
    // from the turning point) or by d = |v - v_*| so the controlling offset
    // is exact in either frame
    const double w2_switch = 0.0025 * amp;
    const double d_switch = 0.05 * amp;
    auto G_of_w = [&](double w) {
        const double w2 = w * w;
        if (w2 < w2_switch) return minus_two_F_near_vm(m, params, tp.v_m, dirs * w2);
        const double d = amp - w2;
        if (d < d_switch) return minus_two_F_near_vs(m, params, dirs * d);
        return std::max(-2.0 * potential(m, params, tp.v_m - dirs * w2).F, 0.0);
    };
    auto G_of_d = [&](double d) {
        if (d < d_switch) return minus_two_F_near_vs(m, params, dirs * d);
        if (amp - d < w2_switch)
            return minus_two_F_near_vm(m, params, tp.v_m, dirs * (amp - d));
        return std::max(-2.0 * potential(m, params, vs + dirs * d).F, 0.0);
    };

    const int N = std::max(64, options.table_zone_points);
    const auto& rule = quadrature::gauss_legendre(16);

    // node positions: zone 1 uniform in w = sqrt(|v_m - v|) from v_m to the
    // half-amplitude point, zone 2 geometric in |v - v*| down to the tail cut
    std::vector<double> node_v;
    node_v.reserve(2 * N + 1);
    const double W = std::sqrt(amp);
    const double w_split = W / std::sqrt(2.0);
    for (int i = 0; i <= N; ++i) {
        const double w = w_split * i / N;
        node_v.push_back(tp.v_m - dirs * w * w);
    }
    const double delta_split = amp / 2.0;
    const double delta_tail = options.tail_cut_rel * amp;
    const double ratio = std::pow(delta_tail / delta_split, 1.0 / N);
    for (int j = 1; j <= N; ++j)
        node_v.push_back(vs + dirs * delta_split * std::pow(ratio, j));

    // accumulate xi(v) along the node chain; integrate zone 1 in w and
    // zone 2 in log|v - v*| so both endpoint degeneracies stay smooth
    prof.t_xi.assign(node_v.size(), 0.0);
    prof.t_v = node_v;
    prof.t_vp.assign(node_v.size(), 0.0);
    prof.t_vpp.assign(node_v.size(), 0.0);

    for (std::size_t i = 0; i < node_v.size(); ++i) {
        const double v = node_v[i];
        double G;  // -2F at this node, from the frame that keeps it clean
        if (i > 0) {
            double seg = 0.0;
            if (i <= static_cast<std::size_t>(N)) {
                const double wa = w_split * (i - 1) / N;
                const double wb = w_split * i / N;
                seg = quadrature::gl_panel(
                    [&](double w) {
                        const double g = G_of_w(w);
                        if (g <= 0.0) return 0.0;
                        return 2.0 * w * std::sqrt(m.kappa(tp.v_m - dirs * w * w) / g);
                    },
                    wa, wb, rule);
            } else {
                const double da = std::abs(node_v[i - 1] - vs);
                const double db = std::abs(v - vs);
                seg = quadrature::gl_panel(
                    [&](double s) {
                        const double d = std::exp(s);
                        const double g = G_of_d(d);
                        if (g <= 0.0) return 0.0;
                        return d * std::sqrt(m.kappa(vs + dirs * d) / g);
                    },
                    std::log(db), std::log(da), rule);
            }
            prof.t_xi[i] = prof.t_xi[i - 1] + std::abs(seg);
        }
        if (i <= static_cast<std::size_t>(N)) {
            const double w = w_split * i / N;
            G = G_of_w(w);
        } else {
            G = G_of_d(std::abs(v - vs));
        }
        const auto pv = potential(m, params, v);
        const double kap = m.kappa(v);
        const double vp = -dirs * std::sqrt(G / kap);  // xi > 0 branch
        prof.t_vp[i] = vp;
        prof.t_vpp[i] = (-pv.F_v - 0.5 * m.kappa_prime(v) * vp * vp) / kap;
    }

    prof.tail_xi = prof.t_xi.back();
    prof.tail_amp = std::abs(prof.t_v.back() - vs);

    // uniform symmetric output grid
    int n = options.n_points;
    if (n < 5) n = 5;
    if (n % 2 == 0) ++n;
    const double xi_max = options.xi_max > 0.0 ? options.xi_max : prof.tail_xi;
    const int mid = n / 2;

    prof.xi.resize(n);
    prof.v.resize(n);
    prof.v_prime.resize(n);
    prof.u.resize(n);

    for (int j = 0; j <= mid; ++j) {
        const double x = xi_max * j / mid;
        double vv, vp;
        prof.sample(x, &vv, &vp);
        prof.xi[mid + j] = x;
        prof.v[mid + j] = vv;
        prof.v_prime[mid + j] = vp;
        prof.xi[mid - j] = -x;
        prof.v[mid - j] = vv;
        prof.v_prime[mid - j] = -vp;
    }
    for (int j = 0; j < n; ++j) prof.u[j] = params.u_star - params.c * (prof.v[j] - vs);

    prof.first_integral_residual = first_integral_residual(prof, m);
    return prof;
}

void profile::sample(double xi_at, double* v_out, double* v_prime_out) const {
    const double x = std::abs(xi_at);
    const double sgn = (xi_at < 0.0) ? -1.0 : 1.0;
    const double vs = params.v_star;
    const double dirs = (direction == wave_direction::elevation) ? 1.0 : -1.0;

    double vv = vs, vp = 0.0;
    if (t_xi.empty() || x >= t_xi.back()) {
        // linear-theory exponential tail
        const double d = tail_amp * std::exp(-decay_rate * (x - tail_xi));
        vv = vs + dirs * d;
        vp = -dirs * decay_rate * d;
    } else {
        auto it = std::upper_bound(t_xi.begin(), t_xi.end(), x);
        std::size_t i = std::max<std::ptrdiff_t>(1, it - t_xi.begin());
        if (i >= t_xi.size()) i = t_xi.size() - 1;
        hermite5_eval(t_xi[i - 1], t_xi[i], t_v[i - 1], t_vp[i - 1], t_vpp[i - 1], t_v[i],
                      t_vp[i], t_vpp[i], x, &vv, &vp);
    }
    if (v_out) *v_out = vv;
    if (v_prime_out) *v_prime_out = sgn * vp;
}

double first_integral_residual(const profile& p, const model& m) {
    double worst = 0.0;
    for (std::size_t j = 0; j < p.xi.size(); ++j) {
        if (std::abs(p.xi[j]) > p.tail_xi) continue;
        const double I = 0.5 * m.kappa(p.v[j]) * p.v_prime[j] * p.v_prime[j] +
                         potential(m, p.params, p.v[j]).F;
        worst = std::max(worst, std::abs(I));
    }
    return worst;
}

}  // namespace ekwave
