#pragma once

// Scalar solver utilities: bracketed root finding for monotone functions,
// golden-section minimization, Richardson-extrapolated derivatives and a
// stable log(e^a + e^b).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace meanscope {

inline double logaddexp(double a, double b) {
    if (std::isinf(a) && a < 0.0) return b;
    if (std::isinf(b) && b < 0.0) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

struct bracket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Root of an increasing function g on [lo, hi]: bisection with secant
// refinement, keeping the bracket valid at every step.
template <class F>
double solve_increasing(F&& g, double lo, double hi, double tol = 1e-13,
                        int max_iter = 200) {
    double glo = g(lo);
    double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (glo > 0.0 || ghi < 0.0) {
        throw bracket_error("solve_increasing: root not bracketed");
    }
    double x = lo;
    for (int it = 0; it < max_iter; ++it) {
        // Secant candidate, falling back to bisection when it leaves the
        // bracket or stalls.
        double cand = lo - glo * (hi - lo) / (ghi - glo);
        const double width = hi - lo;
        if (!(cand > lo && cand < hi)) cand = lo + 0.5 * width;
        if (it % 3 == 2) cand = lo + 0.5 * width;  // guaranteed progress
        x = cand;
        const double gx = g(x);
        if (gx == 0.0 || std::abs(gx) <= tol) return x;
        if (gx < 0.0) {
            lo = x;
            glo = gx;
        } else {
            hi = x;
            ghi = gx;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                           (std::abs(lo) + std::abs(hi) + 1.0)) {
            break;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section minimizer; fn must be unimodal-ish on [lo, hi]. Used only
// to sharpen witness coordinates, so a fixed iteration budget is enough.
template <class F>
double golden_section_min(F&& fn, double lo, double hi, int iters = 80) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = fn(x1);
    double f2 = fn(x2);
    for (int i = 0; i < iters && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = fn(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = fn(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// Central difference with one Richardson step. Also reports the spread
// between the two stencil widths as a noise estimate.
template <class F>
std::pair<double, double> derivative_richardson(F&& f, double x, double step) {
    const double d1 = (f(x + step) - f(x - step)) / (2.0 * step);
    const double h = 0.5 * step;
    const double d2 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double extrapolated = (4.0 * d2 - d1) / 3.0;
    return {extrapolated, std::abs(extrapolated - d2)};
}

}  // namespace meanscope
