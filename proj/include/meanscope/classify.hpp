#pragma once

// Numerical membership tests for the operator-mean classes studied here:
// geometric convexity/concavity (log f(e^x) convex/concave), power monotone
// increase/decrease, the single-exponent and limiting variants, plus a
// Loewner-matrix falsifier for operator monotonicity and parameter-region
// scans against the analytic predicates.
//
// Every verdict is a statement about a finite grid, never a proof; violated
// verdicts carry a witness refined by golden-section search.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "meanscope/gamma_region.hpp"
#include "meanscope/matrix.hpp"
#include "meanscope/mean_function.hpp"
#include "meanscope/solvers.hpp"

namespace meanscope {

enum class property { om_loewner, gcv, gcc, pmi, pmd, pmi_r, pmi_inf };

inline const char* to_string(property p) {
    switch (p) {
        case property::om_loewner: return "om_loewner";
        case property::gcv: return "gcv";
        case property::gcc: return "gcc";
        case property::pmi: return "pmi";
        case property::pmd: return "pmd";
        case property::pmi_r: return "pmi_r";
        case property::pmi_inf: return "pmi_inf";
    }
    return "?";
}

inline std::optional<property> property_from_string(const std::string& s) {
    for (property p : {property::om_loewner, property::gcv, property::gcc,
                       property::pmi, property::pmd, property::pmi_r,
                       property::pmi_inf}) {
        if (s == to_string(p)) return p;
    }
    return std::nullopt;
}

enum class verdict { holds_on_grid, violated };

inline const char* to_string(verdict v) {
    return v == verdict::holds_on_grid ? "holds_on_grid" : "violated";
}

// Log-spaced evaluation grid plus the exponent set used by the pmi-style
// checks. Dense near r = 1, where the criteria are tightest.
struct grid_spec {
    double t_min = 1e-4;
    double t_max = 1e4;
    int n_points = 241;
    std::vector<double> r_values = default_r_values();

    static std::vector<double> default_r_values() {
        std::vector<double> rs;
        for (int k = 6; k >= 1; --k) rs.push_back(1.0 + std::ldexp(1.0, -k));
        for (double r : {2.0, 3.0, 5.0, 10.0}) rs.push_back(r);
        return rs;
    }

    void validate() const {
        if (!(t_min > 0.0) || !(t_min < 1.0) || !(t_max > 1.0)) {
            throw std::invalid_argument("grid_spec: need t_min < 1 < t_max");
        }
        if (n_points < 3) throw std::invalid_argument("grid_spec: n_points < 3");
        for (double r : r_values) {
            if (!(r >= 1.0)) throw std::invalid_argument("grid_spec: r < 1");
        }
    }

    // Equally spaced in x = log t.
    std::vector<double> log_points() const {
        validate();
        std::vector<double> xs(static_cast<std::size_t>(n_points));
        const double lo = std::log(t_min);
        const double hi = std::log(t_max);
        for (int i = 0; i < n_points; ++i) {
            const double s = static_cast<double>(i) / (n_points - 1);
            xs[static_cast<std::size_t>(i)] = (1.0 - s) * lo + s * hi;
        }
        return xs;
    }
};

struct tolerance_config {
    double rel_eval = 1e-10;
    double criterion_slack = 1e-10;
    double fd_step = 1e-4;
    double derivative_tol = 1e-6;

    void validate() const {
        if (!(rel_eval > 0.0) || !(criterion_slack > 0.0) || !(fd_step > 0.0) ||
            !(derivative_tol > 0.0)) {
            throw std::invalid_argument("tolerance_config: nonpositive entry");
        }
    }
};

struct violation_witness {
    double t = 0.0;
    std::optional<double> r;
    double value = 0.0;
};

struct classification_report {
    property prop = property::gcv;
    std::optional<double> r_param;  // set for pmi_r
    verdict result = verdict::holds_on_grid;
    std::optional<violation_witness> witness;
    grid_spec grid;
    tolerance_config tolerances;
    std::string function_name;

    bool holds() const { return result == verdict::holds_on_grid; }
};

namespace detail {

// Central second difference of F(x) = log f(e^x) with step h.
template <class F>
double second_difference(F&& logf, double x, double h) {
    return (logf(x + h) - 2.0 * logf(x) + logf(x - h)) / (h * h);
}

inline classification_report convexity_check(const mean_function& f,
                                             const grid_spec& grid,
                                             const tolerance_config& tol,
                                             bool want_convex) {
    grid.validate();
    tol.validate();
    const std::vector<double> xs = grid.log_points();
    const double h = xs[1] - xs[0];
    const auto logf = [&](double x) { return std::log(f(std::exp(x))); };

    // Sign chosen so that "violations" are always negative excursions.
    const double sign = want_convex ? 1.0 : -1.0;
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_i = 1;
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        const double d2 = sign * second_difference(logf, xs[i], h);
        if (d2 < worst) {
            worst = d2;
            worst_i = i;
        }
    }

    classification_report rep;
    rep.prop = want_convex ? property::gcv : property::gcc;
    rep.grid = grid;
    rep.tolerances = tol;
    rep.function_name = f.name();
    if (worst >= -tol.criterion_slack) {
        rep.result = verdict::holds_on_grid;
        return rep;
    }
    rep.result = verdict::violated;
    const double x_star = golden_section_min(
        [&](double x) { return sign * second_difference(logf, x, h); },
        xs[worst_i - 1], xs[worst_i + 1]);
    violation_witness w;
    w.t = std::exp(x_star);
    w.value = second_difference(logf, x_star, h);
    rep.witness = w;
    return rep;
}

inline classification_report power_check(const mean_function& f,
                                         const grid_spec& grid,
                                         const tolerance_config& tol,
                                         bool want_increase,
                                         std::optional<double> single_r) {
    grid.validate();
    tol.validate();
    if (single_r && !(*single_r > 1.0)) {
        throw std::invalid_argument("check_pmi_r: r must be > 1");
    }
    const std::vector<double> xs = grid.log_points();
    const auto logf = [&](double x) { return std::log(f(std::exp(x))); };
    // margin(x, r) = log f(t^r) - r log f(t), >= 0 for pmi (<= 0 for pmd).
    const double sign = want_increase ? 1.0 : -1.0;
    const auto margin = [&](double x, double r) {
        return sign * (logf(r * x) - r * logf(x));
    };

    std::vector<double> rs =
        single_r ? std::vector<double>{*single_r} : grid.r_values;
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_i = 0;
    double worst_r = rs.front();
    for (double r : rs) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double m = margin(xs[i], r);
            if (m < worst) {
                worst = m;
                worst_i = i;
                worst_r = r;
            }
        }
    }

    classification_report rep;
    rep.prop = single_r ? property::pmi_r
                        : (want_increase ? property::pmi : property::pmd);
    rep.r_param = single_r;
    rep.grid = grid;
    rep.tolerances = tol;
    rep.function_name = f.name();
    if (worst >= -tol.criterion_slack) {
        rep.result = verdict::holds_on_grid;
        return rep;
    }
    rep.result = verdict::violated;
    const double lo = worst_i == 0 ? xs.front() : xs[worst_i - 1];
    const double hi = worst_i + 1 == xs.size() ? xs.back() : xs[worst_i + 1];
    const double x_star =
        golden_section_min([&](double x) { return margin(x, worst_r); }, lo, hi);
    violation_witness w;
    w.t = std::exp(x_star);
    w.r = worst_r;
    w.value = logf(worst_r * x_star) - worst_r * logf(x_star);
    rep.witness = w;
    return rep;
}

}  // namespace detail

// Geometric convexity: second differences of log f(e^x) all >= -slack.
inline classification_report check_gcv(const mean_function& f,
                                       const grid_spec& grid = {},
                                       const tolerance_config& tol = {}) {
    return detail::convexity_check(f, grid, tol, true);
}

inline classification_report check_gcc(const mean_function& f,
                                       const grid_spec& grid = {},
                                       const tolerance_config& tol = {}) {
    return detail::convexity_check(f, grid, tol, false);
}

// Power monotone increase: log f(t^r) - r log f(t) >= -slack over the grid.
inline classification_report check_pmi(const mean_function& f,
                                       const grid_spec& grid = {},
                                       const tolerance_config& tol = {}) {
    return detail::power_check(f, grid, tol, true, std::nullopt);
}

inline classification_report check_pmd(const mean_function& f,
                                       const grid_spec& grid = {},
                                       const tolerance_config& tol = {}) {
    return detail::power_check(f, grid, tol, false, std::nullopt);
}

inline classification_report check_pmi_r(const mean_function& f, double r,
                                         const grid_spec& grid = {},
                                         const tolerance_config& tol = {}) {
    return detail::power_check(f, grid, tol, true, r);
}

// f'(1) estimated by a Richardson-extrapolated central difference.
// Throws when the stencil spread exceeds derivative_tol.
inline double derivative_at_one(const mean_function& f,
                                const tolerance_config& tol = {}) {
    const auto [d, noise] =
        derivative_richardson([&](double t) { return f(t); }, 1.0, tol.fd_step);
    if (noise > tol.derivative_tol) {
        throw std::runtime_error("derivative_at_one: finite-difference noise");
    }
    return d;
}

// Limiting class: f(t) >= t^{f'(1)} up to a multiplicative 1 - derivative_tol.
inline classification_report check_pmi_inf(const mean_function& f,
                                           const grid_spec& grid = {},
                                           const tolerance_config& tol = {}) {
    grid.validate();
    tol.validate();
    const double slope = derivative_at_one(f, tol);
    const std::vector<double> xs = grid.log_points();
    const auto margin = [&](double x) {
        return std::log(f(std::exp(x))) - slope * x;
    };
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double m = margin(xs[i]);
        if (m < worst) {
            worst = m;
            worst_i = i;
        }
    }
    classification_report rep;
    rep.prop = property::pmi_inf;
    rep.grid = grid;
    rep.tolerances = tol;
    rep.function_name = f.name();
    if (worst >= std::log1p(-tol.derivative_tol)) {
        rep.result = verdict::holds_on_grid;
        return rep;
    }
    rep.result = verdict::violated;
    const double lo = worst_i == 0 ? xs.front() : xs[worst_i - 1];
    const double hi = worst_i + 1 == xs.size() ? xs.back() : xs[worst_i + 1];
    const double x_star = golden_section_min(margin, lo, hi);
    violation_witness w;
    w.t = std::exp(x_star);
    w.value = margin(x_star);
    rep.witness = w;
    return rep;
}

// Minimum eigenvalue of the Loewner matrix of divided differences at the
// given points. Clearly negative values certify that f is not operator
// monotone; nonnegative values are merely consistent with membership.
inline double loewner_min_eigenvalue(const mean_function& f,
                                     const std::vector<double>& points,
                                     const tolerance_config& tol = {}) {
    const int n = static_cast<int>(points.size());
    if (n < 1 || n > 12) {
        throw std::invalid_argument("loewner: need 1..12 points");
    }
    for (int i = 0; i < n; ++i) {
        if (!(points[static_cast<std::size_t>(i)] > 0.0)) {
            throw std::invalid_argument("loewner: points must be positive");
        }
        for (int j = i + 1; j < n; ++j) {
            if (points[static_cast<std::size_t>(i)] ==
                points[static_cast<std::size_t>(j)]) {
                throw std::invalid_argument("loewner: duplicate points");
            }
        }
    }
    dense_matrix loewner(n, n);
    for (int i = 0; i < n; ++i) {
        const double xi = points[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            const double xj = points[static_cast<std::size_t>(j)];
            if (i == j) {
                const auto [d, noise] = derivative_richardson(
                    [&](double t) { return f(t); }, xi, tol.fd_step * xi);
                (void)noise;
                loewner(i, j) = d;
            } else {
                loewner(i, j) = (f(xi) - f(xj)) / (xi - xj);
            }
        }
    }
    return min_eigenvalue_sym(loewner);
}

// --- region scans ----------------------------------------------------------

enum class scan_family { uab, stolarsky, binomial };

inline const char* to_string(scan_family f) {
    switch (f) {
        case scan_family::uab: return "uab";
        case scan_family::stolarsky: return "stolarsky";
        case scan_family::binomial: return "binomial";
    }
    return "?";
}

struct scan_row {
    double a = 0.0;
    double b = 0.0;  // unused for 1-parameter families
    bool predicted = false;
    bool observed = false;
    bool boundary = false;  // analytic tie: both classes hold
};

struct region_scan_result {
    scan_family family = scan_family::uab;
    property prop = property::gcv;
    std::vector<scan_row> rows;
    int interior_mismatches = 0;

    std::vector<scan_row> mismatches() const {
        std::vector<scan_row> out;
        for (const scan_row& r : rows) {
            if (!r.boundary && r.predicted != r.observed) out.push_back(r);
        }
        return out;
    }
};

inline std::vector<double> param_range(double lo, double hi, double step) {
    std::vector<double> vals;
    const int count = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= count; ++i) vals.push_back(lo + step * i);
    return vals;
}

namespace detail {

inline bool run_checker(property prop, const mean_function& f,
                        const grid_spec& grid, const tolerance_config& tol) {
    switch (prop) {
        case property::gcv: return check_gcv(f, grid, tol).holds();
        case property::gcc: return check_gcc(f, grid, tol).holds();
        case property::pmi: return check_pmi(f, grid, tol).holds();
        case property::pmd: return check_pmd(f, grid, tol).holds();
        default:
            throw std::invalid_argument("region_scan: unsupported property");
    }
}

}  // namespace detail

// Scan u_{a,b} over a parameter grid, comparing the checker to the analytic
// predicate (in Gamma, gcv/pmi <=> |a| >= |b| and gcc/pmd <=> |a| <= |b|).
// Points outside Gamma are skipped; ties |a| = |b| are marked boundary.
inline region_scan_result region_scan_uab(property prop,
                                          const std::vector<double>& a_values,
                                          const std::vector<double>& b_values,
                                          const grid_spec& grid = {},
                                          const tolerance_config& tol = {}) {
    region_scan_result result;
    result.family = scan_family::uab;
    result.prop = prop;
    const bool convex_side = (prop == property::gcv || prop == property::pmi);
    for (double a : a_values) {
        for (double b : b_values) {
            if (!gamma_contains(a, b)) continue;
            scan_row row;
            row.a = a;
            row.b = b;
            row.boundary = std::abs(std::abs(a) - std::abs(b)) < 1e-12;
            row.predicted =
                convex_side ? std::abs(a) >= std::abs(b) : std::abs(a) <= std::abs(b);
            row.observed =
                detail::run_checker(prop, mean_function::uab(a, b), grid, tol);
            if (!row.boundary && row.predicted != row.observed) {
                ++result.interior_mismatches;
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

// Stolarsky scan: gcv <=> alpha in [-1, 2], gcc <=> alpha in [-2, -1];
// alpha = -1 (the geometric mean) is the boundary tie.
inline region_scan_result region_scan_stolarsky(
    property prop, const std::vector<double>& alphas,
    const grid_spec& grid = {}, const tolerance_config& tol = {}) {
    if (prop != property::gcv && prop != property::gcc) {
        throw std::invalid_argument("region_scan_stolarsky: gcv/gcc only");
    }
    region_scan_result result;
    result.family = scan_family::stolarsky;
    result.prop = prop;
    for (double alpha : alphas) {
        scan_row row;
        row.a = alpha;
        row.boundary = std::abs(alpha + 1.0) < 1e-12;
        row.predicted = prop == property::gcv ? alpha >= -1.0 : alpha <= -1.0;
        row.observed = detail::run_checker(prop, mean_function::stolarsky(alpha),
                                           grid, tol);
        if (!row.boundary && row.predicted != row.observed) {
            ++result.interior_mismatches;
        }
        result.rows.push_back(row);
    }
    return result;
}

// Binomial scan: b_p is geometrically convex exactly for p >= 0 (concave for
// p <= 0), with p = 0 the self-dual square root.
inline region_scan_result region_scan_binomial(
    property prop, const std::vector<double>& ps, const grid_spec& grid = {},
    const tolerance_config& tol = {}) {
    region_scan_result result;
    result.family = scan_family::binomial;
    result.prop = prop;
    const bool convex_side = (prop == property::gcv || prop == property::pmi);
    for (double p : ps) {
        scan_row row;
        row.a = p;
        row.boundary = std::abs(p) < 1e-12;
        row.predicted = convex_side ? p >= 0.0 : p <= 0.0;
        row.observed =
            detail::run_checker(prop, mean_function::binomial(p), grid, tol);
        if (!row.boundary && row.predicted != row.observed) {
            ++result.interior_mismatches;
        }
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace meanscope
