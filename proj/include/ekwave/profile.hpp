#pragma once

#include <optional>
#include <vector>

#include "ekwave/model.hpp"

namespace ekwave {

enum class wave_direction { elevation, depression };

// Open interval of speeds with exponentially decaying solitary tails:
// c^2 < -p'(v_star).
struct existence_interval {
    double c_min = 0.0;
    double c_max = 0.0;
};

existence_interval existence_window(const model& m, double v_star);

// ============================================================
// Turning point v_m(c): the zero of F(., c) consecutive to v_star
// ============================================================

struct turning_point {
    double v_m = 0.0;
    wave_direction direction = wave_direction::elevation;
    double F_v_at_vm = 0.0;   // simple-zero slope; >0 elevation, <0 depression
    double v_m_prime = 0.0;   // dv_m/dc = -F_c(v_m)/F_v(v_m)
    bool both_directions = false;  // admissible turning points exist on both sides
};

// Steps off the double root at v_star (offset 1e-3*max(1,|v_star|), halved on
// failure), expands a geometric bracket to the first sign change of F, and
// polishes the root with a bisection/secant hybrid.  Both sides of v_star are
// searched; `requested` picks a side when both admit waves (default: the
// nearest root, ties to elevation).
turning_point find_turning_point(const model& m, const wave_parameters& params,
                                 std::optional<wave_direction> requested = {},
                                 double root_rel_tol = 1e-12);

// -2F rebuilt without endpoint roundoff. Direct evaluation of F cancels
// catastrophically where F vanishes: near the turning point the computed
// root's residual swamps -2F ~ |F_v| w^2, and near the base state the O(1)
// antiderivative values cancel to O(delta^2). Offsets are passed explicitly
// so the caller controls the only subtraction that matters.
//   near v_m:  v = v_m - delta_m,  -2F = 2 int_v^{v_m} F_v ds   (exact root)
//   near v_*:  v = v_* + delta_s,  F = int_0^{delta_s} (p - p_*) + c^2 delta_s^2/2
// Both clamp at 0.
double minus_two_F_near_vm(const model& m, const wave_parameters& params, double v_m,
                           double delta_m);
double minus_two_F_near_vs(const model& m, const wave_parameters& params, double delta_s);

// ============================================================
// Reconstructed homoclinic profile
// ============================================================

struct profile_options {
    int n_points = 2001;              // uniform output grid (forced odd)
    double xi_max = 0.0;              // 0 = auto: cover down to the tail cut
    double tail_cut_rel = 1e-10;      // switch to the linear tail below this |v - v*|/|v_m - v*|
    double root_rel_tol = 1e-12;
    std::optional<wave_direction> direction;
    int table_zone_points = 600;      // reconstruction nodes per zone (quadrature table)
};

struct profile {
    // uniform grid, symmetric about xi = 0
    std::vector<double> xi, v, v_prime, u;

    wave_parameters params;
    wave_direction direction = wave_direction::elevation;
    double v_m = 0.0;
    double decay_rate = 0.0;                // sqrt(-F_vv(v*, c)/kappa(v*))
    double first_integral_residual = 0.0;   // max |kappa v'^2/2 + F| off the tail
    double tail_xi = 0.0;                   // |xi| beyond which the linear tail is used
    double tail_amp = 0.0;                  // |v - v*| at the tail junction

    // half-line reconstruction table (xi >= 0), used for resampling
    std::vector<double> t_xi, t_v, t_vp, t_vpp;

    // Evaluate (v, v') at any xi: quintic Hermite on the table, exponential
    // tail beyond it, even/odd mirror for xi < 0.
    void sample(double xi_at, double* v_out, double* v_prime_out) const;
};

profile reconstruct_profile(const model& m, const wave_parameters& params,
                            const profile_options& options = {});

// Max-norm of the first integral I = kappa v'^2 / 2 + F over the uniform
// grid, tail region excluded.
double first_integral_residual(const profile& p, const model& m);

}  // namespace ekwave
