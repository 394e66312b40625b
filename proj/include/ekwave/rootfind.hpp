#pragma once

#include <cmath>
#include <limits>

#include "ekwave/errors.hpp"

namespace ekwave::rootfind {

// Bisection/secant hybrid on a sign-changing bracket.  The secant step is
// taken whenever it lands strictly inside the bracket and shrinks it; any
// stall falls back to bisection, so convergence is guaranteed.  Iterates
// until the bracket width drops below rel_tol * |midpoint| (floored at a few
// ulps) -- turning-point roots are polished essentially to machine precision
// by default so that downstream quadratures are not limited by root error.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double flo, double fhi,
                       double rel_tol = 1e-15) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw ek_error("solve_bracketed: endpoints do not bracket a root");

    const double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double width = hi - lo;
        const double tol = std::max(rel_tol * std::abs(mid), 4.0 * eps * std::abs(mid));
        if (width <= tol || width <= std::numeric_limits<double>::denorm_min())
            return mid;

        // secant candidate from current bracket endpoints
        double x = lo - flo * (hi - lo) / (fhi - flo);
        const double margin = 0.01 * width;
        if (!(x > lo + margin && x < hi - margin)) x = mid;

        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0) == (fhi > 0)) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ekwave::rootfind
