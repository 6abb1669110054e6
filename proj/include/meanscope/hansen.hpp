#pragma once

// Integral representation of normalized operator monotone functions through
// a measurable weight h : (-inf, 0] -> [0, 1],
//
//     f(t) = exp INT_{-inf}^0 ( 1/(lambda - t) - 1/(lambda - 1) ) h(lambda) dlambda,
//
// restricted to piecewise-constant h, for which every integral used here has
// an exact antiderivative per piece. The module also carries the two scan
// integrands that certify power-monotone-increase and geometric convexity,
// the phi/psi machinery behind the separating two-piece density, and an
// adaptive-quadrature fallback used to cross-check the closed forms.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "meanscope/quadrature.hpp"
#include "meanscope/solvers.hpp"

namespace meanscope {

struct density_piece {
    double from;   // may be -infinity
    double to;     // <= 0
    double value;  // in [0, 1]
};

class hansen_density {
  public:
    hansen_density() = default;

    explicit hansen_density(std::vector<density_piece> pieces)
        : pieces_(std::move(pieces)) {
        validate();
    }

    const std::vector<density_piece>& pieces() const { return pieces_; }

    static constexpr std::size_t max_pieces = 64;

  private:
    void validate() const {
        if (pieces_.size() > max_pieces) {
            throw std::invalid_argument("hansen_density: too many pieces");
        }
        double prev_to = -std::numeric_limits<double>::infinity();
        bool first = true;
        for (const density_piece& p : pieces_) {
            if (std::isnan(p.from) || std::isnan(p.to) || std::isnan(p.value)) {
                throw std::invalid_argument("hansen_density: NaN field");
            }
            if (!(p.from < p.to)) {
                throw std::invalid_argument("hansen_density: empty interval");
            }
            if (p.to > 0.0) {
                throw std::invalid_argument(
                    "hansen_density: interval extends past 0");
            }
            if (std::isinf(p.from) && !first) {
                throw std::invalid_argument(
                    "hansen_density: only the leftmost interval may be unbounded");
            }
            if (!first && p.from < prev_to) {
                throw std::invalid_argument("hansen_density: overlapping pieces");
            }
            if (p.value < 0.0 || p.value > 1.0) {
                throw std::invalid_argument("hansen_density: value outside [0,1]");
            }
            prev_to = p.to;
            first = false;
        }
    }

    std::vector<density_piece> pieces_;
};

enum class integral_method { closed_form, quadrature };

struct integrand_report {
    double t = 0.0;
    std::optional<double> r;
    double value = 0.0;
    integral_method method = integral_method::closed_form;
};

namespace detail {

// log(t - lambda) for lambda <= 0, taking log t instead of t to stay in the
// log domain when t^r overflows.
inline double log_t_minus_lambda(double log_t, double lambda) {
    if (lambda == 0.0) return log_t;
    return logaddexp(log_t, std::log(-lambda));
}

// Antiderivative of the representation kernel: log((t-lambda)/(1-lambda)),
// tending to 0 as lambda -> -inf.
inline double rep_antiderivative(double log_t, double lambda) {
    if (std::isinf(lambda)) return 0.0;
    return log_t_minus_lambda(log_t, lambda) - log_t_minus_lambda(0.0, lambda);
}

// Antiderivative of the pmi kernel
//   1/(lambda - t^r) - r/(lambda - t) + (r-1)/(lambda - 1),
// again vanishing at lambda -> -inf.
inline double pmi_antiderivative(double log_t, double r, double lambda) {
    if (std::isinf(lambda)) return 0.0;
    return log_t_minus_lambda(r * log_t, lambda) -
           r * log_t_minus_lambda(log_t, lambda) +
           (r - 1.0) * log_t_minus_lambda(0.0, lambda);
}

// Antiderivative of (lambda + t)/(lambda - t)^3.
inline double gcv_antiderivative(double t, double lambda) {
    if (std::isinf(lambda)) return 0.0;
    const double d = lambda - t;
    return -1.0 / d - t / (d * d);
}

// Improper integrals over (c, d) in (-inf, 0] are mapped to x in (0, 1] by
// x = 1/(1 - lambda); the infinite endpoint lands at x = 0. The callers
// supply the kernel already multiplied by the Jacobian (lambda-1)^2 = 1/x^2
// and simplified to a cancellation-free form in x.
template <class Transformed>
double quadrature_piece(Transformed&& g, double c, double d, double eps) {
    const double x_lo = std::isinf(c) ? 0.0 : 1.0 / (1.0 - c);
    const double x_hi = 1.0 / (1.0 - d);
    return adaptive_simpson(g, x_lo, x_hi, eps);
}

}  // namespace detail

// f(t) for a piecewise-constant density. Closed form by default; the
// quadrature path exists to cross-check it.
inline double hansen_log_eval(const hansen_density& h, double t,
                              integral_method method = integral_method::closed_form) {
    if (!(t > 0.0)) throw std::domain_error("hansen_eval: t must be positive");
    const double log_t = std::log(t);
    double acc = 0.0;
    for (const density_piece& p : h.pieces()) {
        if (method == integral_method::closed_form) {
            acc += p.value * (detail::rep_antiderivative(log_t, p.to) -
                              detail::rep_antiderivative(log_t, p.from));
        } else {
            // Kernel times Jacobian under x = 1/(1-lambda); the denominator
            // is written as (1-x) + t x to avoid cancellation near x = 1.
            const auto g = [&](double x) {
                return (t - 1.0) / ((1.0 - x) + t * x);
            };
            acc += p.value * detail::quadrature_piece(g, p.from, p.to, 1e-10);
        }
    }
    return acc;
}

inline double hansen_eval(const hansen_density& h, double t,
                          integral_method method = integral_method::closed_form) {
    return std::exp(hansen_log_eval(h, t, method));
}

// Criterion integral for power monotone increase; equals
// log f(t^r) - r log f(t) and must be >= 0 for all t > 0, r >= 1.
inline double pmi_integrand(const hansen_density& h, double t, double r,
                            integral_method method = integral_method::closed_form) {
    if (!(t > 0.0)) throw std::domain_error("pmi_integrand: t must be positive");
    if (!(r >= 1.0)) throw std::invalid_argument("pmi_integrand: r must be >= 1");
    const double log_t = std::log(t);
    double acc = 0.0;
    for (const density_piece& p : h.pieces()) {
        if (method == integral_method::closed_form) {
            acc += p.value * (detail::pmi_antiderivative(log_t, r, p.to) -
                              detail::pmi_antiderivative(log_t, r, p.from));
        } else {
            const double tr = std::exp(r * log_t);
            const auto g = [&](double x) {
                return (tr - 1.0) / ((1.0 - x) + tr * x) -
                       r * (t - 1.0) / ((1.0 - x) + t * x);
            };
            acc += p.value * detail::quadrature_piece(g, p.from, p.to, 1e-10);
        }
    }
    return acc;
}

// Criterion integral for geometric convexity,
//   INT (lambda + t)/(lambda - t)^3 h(lambda) dlambda,
// nonnegative for all t > 0 exactly when f is geometrically convex. Note
// d^2/dx^2 log f(e^x) at x = log t equals t times this value.
inline double gcv_integrand(const hansen_density& h, double t,
                            integral_method method = integral_method::closed_form) {
    if (!(t > 0.0)) throw std::domain_error("gcv_integrand: t must be positive");
    double acc = 0.0;
    for (const density_piece& p : h.pieces()) {
        if (method == integral_method::closed_form) {
            acc += p.value * (detail::gcv_antiderivative(t, p.to) -
                              detail::gcv_antiderivative(t, p.from));
        } else {
            const auto g = [&](double x) {
                const double den = (1.0 - x) + t * x;
                return ((1.0 - x) - t * x) / (den * den * den);
            };
            acc += p.value * detail::quadrature_piece(g, p.from, p.to, 1e-10);
        }
    }
    return acc;
}

inline integrand_report make_integrand_report(const hansen_density& h, double t,
                                              std::optional<double> r,
                                              integral_method method) {
    integrand_report rep;
    rep.t = t;
    rep.r = r;
    rep.method = method;
    rep.value = r ? pmi_integrand(h, t, *r, method) : gcv_integrand(h, t, method);
    return rep;
}

// The two-piece density separating geometric convexity from power monotone
// increase: weight 9/14 on (-inf, -2) and 5/14 on (-1, 0). The induced
// function is ((t+2)/3)^{9/14} * (2t/(t+1))^{5/14}.
inline hansen_density theorem_counterexample() {
    const double alpha = 9.0 / 14.0;
    return hansen_density({
        {-std::numeric_limits<double>::infinity(), -2.0, alpha},
        {-1.0, 0.0, 1.0 - alpha},
    });
}

// phi(t) = beta log(3^{r-1}(t^r+2)/(t+2)^r) - log(2^{r-1}(t^r+1)/(t+1)^r).
// For the theorem density, pmi_integrand = (1-alpha) * phi with beta = 9/5.
inline double phi_eval(double beta, double r, double t) {
    if (!(t > 0.0)) throw std::domain_error("phi_eval: t must be positive");
    const double log_t = std::log(t);
    const double log3 = std::log(3.0);
    const double log2 = std::log(2.0);
    const double first = (r - 1.0) * log3 + logaddexp(r * log_t, log2) -
                         r * logaddexp(log_t, log2);
    const double second = (r - 1.0) * log2 + logaddexp(r * log_t, 0.0) -
                          r * logaddexp(log_t, 0.0);
    return beta * first - second;
}

// psi_{beta,r}(t) = (beta - 1/2) t^{r+1} + (beta - 1)(t^r + t) - (2 - beta);
// its unique positive root locates the interior critical point of phi.
inline double psi_eval(double beta, double r, double t) {
    if (!(t > 0.0)) throw std::domain_error("psi_eval: t must be positive");
    return (beta - 0.5) * std::pow(t, r + 1.0) +
           (beta - 1.0) * (std::pow(t, r) + t) - (2.0 - beta);
}

// Closed form of dphi/dt used to cross-check psi against finite differences:
//   2 r (t^{r-1} - 1) psi_{beta,r}(t) / ((t^r+2)(t^r+1)(t+2)(t+1)).
// Derivable directly from phi; its sign on (0,1) and (1,inf) is what pins
// min phi = phi(1).
inline double phi_derivative(double beta, double r, double t) {
    const double tr = std::pow(t, r);
    const double num =
        2.0 * r * (std::pow(t, r - 1.0) - 1.0) * psi_eval(beta, r, t);
    const double den = (tr + 2.0) * (tr + 1.0) * (t + 2.0) * (t + 1.0);
    return num / den;
}

}  // namespace meanscope
