#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ekwave/model.hpp"
#include "ekwave/profile.hpp"

namespace ekwave {

// ============================================================
// Stability verdicts (Theorem 1 / Lemma 1 rules)
// ============================================================

enum class stability_verdict {
    unstable_standing,   // c = 0: every non-trivial standing wave
    unstable_nonconvex,  // c != 0 and m''(c) < -tol
    inconclusive         // m''(c) >= -tol: convexity proves nothing here
};

enum class analysis_status { ok, no_solitary_wave, sonic_degenerate };

const char* to_string(stability_verdict v);  // "UnstableStanding", ...
const char* to_string(analysis_status s);    // "Ok", "NoSolitaryWave", "SonicDegenerate"

// Sign-call threshold on m''; values in (-tol, tol) get a near-zero flag.
inline constexpr double k_verdict_tol = 1e-8;

struct verdict_call {
    stability_verdict verdict = stability_verdict::inconclusive;
    bool theorem_inconsistency = false;  // c = 0 but computed m'' not < -tol
    bool near_zero_second = false;       // |m''| < tol: sign call unreliable
};

verdict_call stability_call(double c, double m_second, double tol = k_verdict_tol);

// ============================================================
// Moment of instability m(c) and derivatives
// ============================================================

struct moment_tolerances {
    double quad_abs_tol = 1e-12;  // dyadic-refinement stopping difference
    double root_rel_tol = 1e-12;  // turning-point polish
};

// Samples of the m'' integrand after the w = sqrt(|v_m - v|) substitution.
struct second_derivative_integrand {
    double w = 0.0;
    double A = 0.0;         // F kappa_v v_m' F_c
    double B = 0.0;         // kappa (v-v*) [2F((v-v*)+2c v_m') - c(v-v*)(F_v v_m' + F_c)]
    double combined = 0.0;  // 2w (A+B) / (sqrt(kappa) (-2F)^{3/2})
};

struct moment_second_result {
    double value = std::numeric_limits<double>::quiet_NaN();
    double error_estimate = 0.0;
    bool converged = false;
    // Endpoint limits are removable; both are recovered by one-sided
    // Richardson extrapolation from offsets of 1e-6 of the interval.
    second_derivative_integrand at_turning;  // w -> 0 (v -> v_m)
    second_derivative_integrand at_base;     // w -> W (v -> v_star)
    bool large_error = false;  // endpoint extrapolation pairs disagree > 1e-6 rel
};

// m(c) = 4 int_0^W sqrt(kappa) sqrt(-2F) w dw,  W = sqrt(|v_m - v_star|)
double moment(const model& m, const wave_parameters& params,
              const moment_tolerances& tol = {});
double moment(const model& m, const wave_parameters& params, const turning_point& tp,
              const moment_tolerances& tol = {});

// m'(c) = -4 int_0^W sqrt(kappa) F_c / sqrt(-2F) w dw
double moment_prime(const model& m, const wave_parameters& params,
                    const moment_tolerances& tol = {});
double moment_prime(const model& m, const wave_parameters& params, const turning_point& tp,
                    const moment_tolerances& tol = {});

// m''(c) = 2 int (A+B) / (sqrt(kappa) (-2F)^{3/2}) dv, evaluated in w
moment_second_result moment_second(const model& m, const wave_parameters& params,
                                   const moment_tolerances& tol = {});
moment_second_result moment_second(const model& m, const wave_parameters& params,
                                   const turning_point& tp,
                                   const moment_tolerances& tol = {});

// Integrand sample at a given w (for property checks: A(v,0) = 0, B(v,0) < 0).
second_derivative_integrand moment_second_integrand(const model& m,
                                                    const wave_parameters& params,
                                                    const turning_point& tp, double w);

// Reduced c = 0 formula (only B survives):
//   m''(0) = -2 int sqrt(kappa) (v - v_star)^2 / sqrt(-2F(v, 0)) dv
double moment_second_standing(const model& m, double v_star,
                              const moment_tolerances& tol = {});

// Independent cross-check: trapezoidal integral of kappa(v) v'^2 over the
// profile grid plus the analytic exponential-tail correction.
double moment_direct(const profile& p, const model& m);

// ============================================================
// Per-speed report and curve sampling
// ============================================================

struct quadrature_error_estimates {
    double m = 0.0;
    double m_prime = 0.0;
    double m_second = 0.0;
};

struct moment_report {
    double c = 0.0;
    double v_star = 0.0;
    double u_star = 0.0;

    analysis_status status = analysis_status::ok;
    std::string status_detail;  // diagnostic text for failed rows

    // populated when status == ok
    double v_m = std::numeric_limits<double>::quiet_NaN();
    double v_m_prime = std::numeric_limits<double>::quiet_NaN();
    std::optional<wave_direction> direction;
    double m = std::numeric_limits<double>::quiet_NaN();
    double m_prime = std::numeric_limits<double>::quiet_NaN();
    double m_second = std::numeric_limits<double>::quiet_NaN();
    quadrature_error_estimates errors;

    std::optional<stability_verdict> verdict;
    bool near_zero_second = false;
    bool theorem_inconsistency = false;
    bool large_error = false;
};

moment_report analyze_speed(const model& m, const wave_parameters& params,
                            std::optional<wave_direction> direction = {},
                            const moment_tolerances& tol = {});

// One report per speed; inadmissible speeds become status rows, not errors.
std::vector<moment_report> moment_curve(const model& m, double v_star, double u_star,
                                        const std::vector<double>& speeds,
                                        std::optional<wave_direction> direction = {},
                                        const moment_tolerances& tol = {});

}  // namespace ekwave
