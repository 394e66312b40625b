#pragma once

#include <limits>
#include <memory>
#include <string>

#include "ekwave/errors.hpp"
#include "ekwave/expr.hpp"

namespace ekwave {

enum class model_kind { bona_sachs, gross_pitaevskii, user_defined };

// Open interval of admissible specific volumes v.
struct domain_interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double v) const { return v > lo && v < hi; }
};

// ============================================================
// model: pressure law p(v) and capillarity kappa(v)
// ============================================================
//
// Built-in families:
//   bona-sachs        p(v) = -v + v^q          kappa(v) = 1          (q >= 2)
//   gross-pitaevskii  p(v) = a/v^2 - b/v^3     kappa(v) = 1/(4 v^4)  (a, b > 0, v > 0)
//
// User-defined models supply p and kappa as expression text; derivatives come
// from symbolic differentiation, and the pressure antiderivative falls back
// to adaptive quadrature with a memo shared through the (immutable) handle.
class model {
public:
    static model bona_sachs(int q);
    static model gross_pitaevskii(double alpha, double beta);
    static model user_defined(const std::string& p_src, const std::string& kappa_src,
                              const param_map& params);

    // "bona-sachs:q=2", "gross-pitaevskii:alpha=1,beta=2" (parameters optional).
    static model from_selector(const std::string& selector);

    // Key/value model file: fields `p = <expr>`, `kappa = <expr>`,
    // `params.<name> = <number>`; '#' starts a comment.
    static model from_file(const std::string& path);

    model_kind kind() const;
    const std::string& name() const;
    const domain_interval& domain() const;
    std::string p_formula() const;
    std::string kappa_formula() const;

    double p(double v) const;
    double p_prime(double v) const;
    double kappa(double v) const;        // validated: kappa(v) > 0 or domain_error
    double kappa_prime(double v) const;

    // ∫_{v_ref}^{v} p(s) ds; closed form for built-ins, memoized adaptive
    // quadrature (abs tol 1e-12) for user models.
    double antiderivative_diff(double v, double v_ref) const;

private:
    struct impl;
    explicit model(std::shared_ptr<const impl> i) : impl_(std::move(i)) {}
    std::shared_ptr<const impl> impl_;
};

// Base state and wave speed.  u_star is free in the underlying theory; it
// defaults to 0 and is carried through to reports.
struct wave_parameters {
    double v_star = 0.0;
    double u_star = 0.0;
    double c = 0.0;
};

// ============================================================
// Effective potential F(v, c) and partial derivatives
// ============================================================
//
//   F(v, c) = ∫_{v*}^{v} p(s) ds - p(v*)(v - v*) + c^2 (v - v*)^2 / 2
//   F_v     = p(v) - p(v*) + c^2 (v - v*)
//   F_c     = c (v - v*)^2
//
// F has an exact double root at v = v_star.
struct potential_values {
    double F = 0.0;
    double F_v = 0.0;
    double F_c = 0.0;
};

potential_values potential(const model& m, const wave_parameters& params, double v);

}  // namespace ekwave
