#pragma once

// Quadrature routines: adaptive Simpson for smooth 1-d integrands and
// Gauss-Legendre node/weight tables generated by Newton iteration.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace meanscope {

namespace detail {

template <class F>
double simpson_step(F&& f, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Once delta sits at the rounding noise of the panel sums, further
    // splitting only burns evaluations.
    const double noise_floor =
        1e-14 * (std::abs(left) + std::abs(right) + std::abs(whole));
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps ||
        std::abs(delta) <= noise_floor) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b] with absolute target eps.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double eps = 1e-9,
                        int max_depth = 48) {
    if (!(a <= b)) throw std::invalid_argument("adaptive_simpson: a > b");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, eps, max_depth);
}

struct quadrature_rule {
    std::vector<double> nodes;    // on [0, 1]
    std::vector<double> weights;  // sum to 1
};

// n-point Gauss-Legendre rule mapped to [0, 1]. Nodes are the Legendre roots
// found by Newton iteration from the Chebyshev initial guess.
inline quadrature_rule gauss_legendre_01(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_01: n < 1");
    quadrature_rule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_n(x) and P_n'(x).
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
    return rule;
}

// Shared 64-node rule; the integrands here are analytic so 64 nodes are
// far beyond the accuracy of double arithmetic.
inline const quadrature_rule& gauss_legendre_64() {
    static const quadrature_rule rule = gauss_legendre_01(64);
    return rule;
}

template <class F>
double integrate_01_gl64(F&& f) {
    const quadrature_rule& rule = gauss_legendre_64();
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(rule.nodes[i]);
    }
    return sum;
}

}  // namespace meanscope
