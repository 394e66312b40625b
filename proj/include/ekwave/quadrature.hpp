#pragma once

#include <cmath>
#include <vector>

namespace ekwave::quadrature {

// ============================================================
// Gauss-Legendre rules
// ============================================================

struct gl_rule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;  // sum to 2
};

// Nodes and weights computed by Newton iteration on P_n (cached per n).
const gl_rule& gauss_legendre(int n);

template <class F>
double gl_panel(F&& f, double a, double b, const gl_rule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

// ============================================================
// Composite rule with dyadic panel refinement
// ============================================================

struct quad_result {
    double value = 0.0;
    double error_estimate = 0.0;  // |last - previous refinement|
    int panels = 1;
    bool converged = false;
};

// Splits [a, b] into 1, 2, 4, ... uniform panels (each integrated with an
// n-point Gauss-Legendre rule) until two successive composite estimates agree
// to abs_tol, or the panel count would exceed max_panels.
template <class F>
quad_result integrate_dyadic(F&& f, double a, double b, double abs_tol = 1e-12,
                             int max_panels = 40, int nodes_per_panel = 32) {
    const gl_rule& rule = gauss_legendre(nodes_per_panel);
    quad_result res;
    double prev = 0.0;
    bool have_prev = false;
    for (int p = 1; p <= max_panels; p *= 2) {
        const double h = (b - a) / p;
        double total = 0.0;
        for (int i = 0; i < p; ++i) total += gl_panel(f, a + i * h, a + (i + 1) * h, rule);
        res.value = total;
        res.panels = p;
        if (have_prev) {
            res.error_estimate = std::abs(total - prev);
            if (res.error_estimate < abs_tol) {
                res.converged = true;
                return res;
            }
        }
        prev = total;
        have_prev = true;
    }
    return res;
}

}  // namespace ekwave::quadrature
