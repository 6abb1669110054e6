#pragma once

// Representation functions of operator means: the parametric families
// (powers t^alpha, binomial means b_p, the two-parameter ratio family
// u_{a,b}, Stolarsky means, geodesic means, Hansen densities, normalized
// root products) together with the closure operations that build new
// candidates from old ones (adjoint, product, function powers, sigma
// composition, shifted functional inverses).
//
// Values are immutable trees behind a shared pointer; evaluation is a pure
// function of (tree, t), so instances can be copied and evaluated
// concurrently without synchronization.

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "meanscope/gamma_region.hpp"
#include "meanscope/geodesic.hpp"
#include "meanscope/hansen.hpp"
#include "meanscope/solvers.hpp"

namespace meanscope {

namespace detail {

inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// (t^x - 1)/x evaluated from L = log t, with the x = 0 limit log t built in.
// The series branch keeps the seams |a|,|b| < 1e-6 continuous to ~1e-15.
inline double log_pow_diff_quotient(double x, double L) {
    double z = x * L;
    if (std::abs(x) < 1e-6) {
        const double series = 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
        return std::log(std::abs(L)) + std::log(series);
    }
    if (z > 700.0) return z - std::log(std::abs(x));   // e^z dominates
    if (z < -700.0) return -std::log(std::abs(x));     // e^z vanishes
    return std::log(std::abs(std::expm1(z))) - std::log(std::abs(x));
}

// log u_{a,b}(t) = log[(t^a-1)/a] - log[(t^b-1)/b] with t = e^L.
// Near t = 1 the 0/0 ratio is replaced by its second-order Taylor series.
inline double log_uab(double a, double b, double L) {
    if (L == 0.0) return 0.0;
    if (std::abs(L) < 1e-7) {
        const double den = 1.0 + L * (b / 2.0 + b * b * L / 6.0);
        const double delta =
            L * ((a - b) / 2.0 + (a * a - b * b) * L / 6.0) / den;
        return std::log1p(delta);
    }
    return log_pow_diff_quotient(a, L) - log_pow_diff_quotient(b, L);
}

// log of the Stolarsky mean S_alpha(1, t) = u_{alpha,1}(t)^{1/(alpha-1)},
// with the identric limit at alpha = 1 entered through a first-order
// expansion for |alpha - 1| < 1e-6.
inline double log_stolarsky(double alpha, double L) {
    if (L == 0.0) return 0.0;
    if (std::abs(alpha - 1.0) < 1e-6) {
        if (std::abs(L) < 1e-7) return 0.5 * L + L * L / 12.0;
        const double t = std::exp(L);
        const double m1 = L * t / (t - 1.0) - 1.0;
        const double m2 = 1.0 - L * L * t / ((t - 1.0) * (t - 1.0));
        return m1 + 0.5 * m2 * (alpha - 1.0);
    }
    return log_uab(alpha, 1.0, L) / (alpha - 1.0);
}

// log b_p(t) = log((t^p+1)/2)/p; expm1/log1p keep it stable through p -> 0.
inline double log_binomial(double p, double L) {
    if (p == 0.0) return 0.5 * L;
    const double z = p * L;
    if (z > 700.0) return (z - std::log(2.0)) / p;
    return std::log1p(0.5 * std::expm1(z)) / p;
}

}  // namespace detail

enum class family_kind {
    power,
    binomial,
    uab,
    stolarsky,
    geodesic,
    hansen,
    polynomial_u,
    section5,
    adjoint,
    product,
    power_of,
    sigma_compose,
    inverse_of,
};

class mean_function {
  public:
    // --- family constructors -------------------------------------------

    static mean_function power(double alpha) {
        require_finite(alpha, "power: alpha");
        return make(power_node{alpha}, "power(" + detail::fmt_num(alpha) + ")");
    }

    static mean_function binomial(double p) {
        require_finite(p, "binomial: p");
        if (p < -1.0 || p > 1.0) {
            throw std::invalid_argument("binomial: p outside [-1,1]");
        }
        return make(binomial_node{p}, "binomial(" + detail::fmt_num(p) + ")");
    }

    // u_{a,b}(t) = (b/a)(t^a-1)/(t^b-1); parameters must lie in Gamma.
    static mean_function uab(double a, double b) {
        if (!gamma_contains(a, b)) {
            throw std::invalid_argument("uab: (a,b) outside Gamma");
        }
        return make(uab_node{a, b, true}, uab_name(a, b));
    }

    // Same formula without the Gamma membership requirement; the result is
    // generally not an operator mean and exists for falsification runs.
    static mean_function uab_formula(double a, double b) {
        require_finite(a, "uab: a");
        require_finite(b, "uab: b");
        if (a == 0.0 && b == 0.0) {
            throw std::invalid_argument("uab: (0,0) is excluded");
        }
        if (std::abs(a) > 2.0 || std::abs(b) > 2.0) {
            throw std::invalid_argument("uab: parameters outside [-2,2]");
        }
        return make(uab_node{a, b, gamma_contains(a, b)}, uab_name(a, b));
    }

    static mean_function stolarsky(double alpha) {
        require_finite(alpha, "stolarsky: alpha");
        if (alpha < -2.0 || alpha > 2.0) {
            throw std::invalid_argument("stolarsky: alpha outside [-2,2]");
        }
        return make(stolarsky_node{alpha},
                    "stolarsky(" + detail::fmt_num(alpha) + ")");
    }

    static mean_function geodesic(geodesic_measure m) {
        return make(geodesic_node{std::move(m)}, "geodesic");
    }

    static mean_function hansen(hansen_density h) {
        return make(hansen_node{std::move(h)}, "hansen");
    }

    // u(t) = beta * prod (t + a_i)^{gamma_i} with 0 = a_1 < a_2 < ...,
    // gamma_1 >= 1 and u(1) = 1. Omitting beta normalizes automatically.
    static mean_function polynomial_u(std::vector<double> roots,
                                      std::vector<double> exponents) {
        double log_at_1 = 0.0;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            log_at_1 += exponents[i] * std::log1p(roots[i]);
        }
        return polynomial_u(std::exp(-log_at_1), std::move(roots),
                            std::move(exponents));
    }

    static mean_function polynomial_u(double beta, std::vector<double> roots,
                                      std::vector<double> exponents) {
        if (roots.empty() || roots.size() != exponents.size()) {
            throw std::invalid_argument("polynomial_u: bad root/exponent lists");
        }
        if (roots.front() != 0.0) {
            throw std::invalid_argument("polynomial_u: first root must be 0");
        }
        if (exponents.front() < 1.0) {
            throw std::invalid_argument("polynomial_u: first exponent must be >= 1");
        }
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (i + 1 < roots.size() && !(roots[i] < roots[i + 1])) {
                throw std::invalid_argument(
                    "polynomial_u: roots must be strictly increasing");
            }
            if (!(exponents[i] > 0.0)) {
                throw std::invalid_argument("polynomial_u: exponents must be > 0");
            }
        }
        if (!(beta > 0.0)) {
            throw std::invalid_argument("polynomial_u: beta must be > 0");
        }
        double log_at_1 = std::log(beta);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            log_at_1 += exponents[i] * std::log1p(roots[i]);
        }
        if (std::abs(log_at_1) > 1e-9) {
            throw std::invalid_argument("polynomial_u: u(1) must equal 1");
        }
        return make(polynomial_node{beta, std::move(roots), std::move(exponents)},
                    "polynomial_u");
    }

    // f(t) = ((1/3)t + (2/3)t^{1/3}) / ((1/3) + (2/3)t^{1/3}); lies above
    // t^{1/3} yet f(t^r)/f(t)^r -> 2^{1-r} as t -> 0.
    static mean_function section5_example() {
        return make(section5_node{}, "section5");
    }

    // --- closure operations --------------------------------------------

    // f*(t) = 1/f(1/t).
    mean_function adjoint() const {
        return make(adjoint_node{node_}, "adjoint(" + name_ + ")");
    }

    mean_function pow(double alpha) const {
        require_finite(alpha, "pow: alpha");
        return make(power_of_node{node_, alpha},
                    "pow(" + name_ + "," + detail::fmt_num(alpha) + ")");
    }

    friend mean_function operator*(const mean_function& lhs,
                                   const mean_function& rhs) {
        return make(product_node{lhs.node_, rhs.node_},
                    "product(" + lhs.name_ + "," + rhs.name_ + ")");
    }

    // (f sigma_h g)(t) = f(t) h(g(t)/f(t)).
    static mean_function sigma_compose(const mean_function& f,
                                       const mean_function& g,
                                       const mean_function& h) {
        return make(sigma_node{f.node_, g.node_, h.node_},
                    "sigma(" + f.name_ + "," + g.name_ + "," + h.name_ + ")");
    }

    // s |-> (t^shift f)^{(-1)}(s), evaluated by bracketed root finding.
    mean_function shifted_inverse(double shift) const {
        if (!(shift >= 0.0)) {
            throw std::invalid_argument("shifted_inverse: shift must be >= 0");
        }
        return make(inverse_node{node_, shift},
                    "inverse(" + name_ + "," + detail::fmt_num(shift) + ")");
    }

    // --- evaluation ------------------------------------------------------

    double operator()(double t) const {
        if (!(t > 0.0)) {
            throw std::domain_error("mean_function: t must be positive");
        }
        return eval_node(*node_, t);
    }

    family_kind kind() const { return node_->kind; }
    const std::string& name() const { return name_; }

    // For uab nodes: whether (a,b) is in Gamma (true for every other family).
    bool gamma_member() const {
        if (const auto* u = std::get_if<uab_node>(&node_->payload)) {
            return u->gamma_member;
        }
        return true;
    }

  private:
    struct node;
    using node_ptr = std::shared_ptr<const node>;

    struct power_node {
        double alpha;
    };
    struct binomial_node {
        double p;
    };
    struct uab_node {
        double a, b;
        bool gamma_member;
    };
    struct stolarsky_node {
        double alpha;
    };
    struct geodesic_node {
        geodesic_measure m;
    };
    struct hansen_node {
        hansen_density h;
    };
    struct polynomial_node {
        double beta;
        std::vector<double> roots, exponents;
    };
    struct section5_node {};
    struct adjoint_node {
        node_ptr inner;
    };
    struct product_node {
        node_ptr lhs, rhs;
    };
    struct power_of_node {
        node_ptr inner;
        double alpha;
    };
    struct sigma_node {
        node_ptr f, g, h;
    };
    struct inverse_node {
        node_ptr inner;
        double shift;
    };

    using payload_t =
        std::variant<power_node, binomial_node, uab_node, stolarsky_node,
                     geodesic_node, hansen_node, polynomial_node, section5_node,
                     adjoint_node, product_node, power_of_node, sigma_node,
                     inverse_node>;

    struct node {
        family_kind kind;
        payload_t payload;
    };

    template <class Payload>
    static mean_function make(Payload payload, std::string name) {
        mean_function f;
        f.node_ = std::make_shared<const node>(
            node{kind_of<Payload>(), payload_t{std::move(payload)}});
        f.name_ = std::move(name);
        return f;
    }

    template <class Payload>
    static constexpr family_kind kind_of() {
        if constexpr (std::is_same_v<Payload, power_node>) {
            return family_kind::power;
        } else if constexpr (std::is_same_v<Payload, binomial_node>) {
            return family_kind::binomial;
        } else if constexpr (std::is_same_v<Payload, uab_node>) {
            return family_kind::uab;
        } else if constexpr (std::is_same_v<Payload, stolarsky_node>) {
            return family_kind::stolarsky;
        } else if constexpr (std::is_same_v<Payload, geodesic_node>) {
            return family_kind::geodesic;
        } else if constexpr (std::is_same_v<Payload, hansen_node>) {
            return family_kind::hansen;
        } else if constexpr (std::is_same_v<Payload, polynomial_node>) {
            return family_kind::polynomial_u;
        } else if constexpr (std::is_same_v<Payload, section5_node>) {
            return family_kind::section5;
        } else if constexpr (std::is_same_v<Payload, adjoint_node>) {
            return family_kind::adjoint;
        } else if constexpr (std::is_same_v<Payload, product_node>) {
            return family_kind::product;
        } else if constexpr (std::is_same_v<Payload, power_of_node>) {
            return family_kind::power_of;
        } else if constexpr (std::is_same_v<Payload, sigma_node>) {
            return family_kind::sigma_compose;
        } else {
            return family_kind::inverse_of;
        }
    }

    static void require_finite(double v, const char* what) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + " must be finite");
        }
    }

    static std::string uab_name(double a, double b) {
        return "uab(" + detail::fmt_num(a) + "," + detail::fmt_num(b) + ")";
    }

    static double eval_node(const node& n, double t);

    node_ptr node_;
    std::string name_;
};

inline double mean_function::eval_node(const node& n, double t) {
    struct visitor {
        double t;

        double operator()(const power_node& p) const {
            return std::exp(p.alpha * std::log(t));
        }
        double operator()(const binomial_node& p) const {
            return std::exp(detail::log_binomial(p.p, std::log(t)));
        }
        double operator()(const uab_node& p) const {
            return std::exp(detail::log_uab(p.a, p.b, std::log(t)));
        }
        double operator()(const stolarsky_node& p) const {
            return std::exp(detail::log_stolarsky(p.alpha, std::log(t)));
        }
        double operator()(const geodesic_node& p) const { return p.m(t); }
        double operator()(const hansen_node& p) const {
            return hansen_eval(p.h, t);
        }
        double operator()(const polynomial_node& p) const {
            double acc = std::log(p.beta);
            for (std::size_t i = 0; i < p.roots.size(); ++i) {
                acc += p.exponents[i] * std::log(t + p.roots[i]);
            }
            return std::exp(acc);
        }
        double operator()(const section5_node&) const {
            const double c = std::cbrt(t);
            return (t + 2.0 * c) / (1.0 + 2.0 * c);
        }
        double operator()(const adjoint_node& p) const {
            return 1.0 / eval_node(*p.inner, 1.0 / t);
        }
        double operator()(const product_node& p) const {
            return eval_node(*p.lhs, t) * eval_node(*p.rhs, t);
        }
        double operator()(const power_of_node& p) const {
            return std::exp(p.alpha * std::log(eval_node(*p.inner, t)));
        }
        double operator()(const sigma_node& p) const {
            const double fv = eval_node(*p.f, t);
            const double gv = eval_node(*p.g, t);
            return fv * eval_node(*p.h, gv / fv);
        }
        double operator()(const inverse_node& p) const {
            // Solve tau^shift f(tau) = t on a log-spaced bracket.
            const double log_target = std::log(t);
            const auto gap = [&](double x) {
                return p.shift * x + std::log(eval_node(*p.inner, std::exp(x))) -
                       log_target;
            };
            const double x =
                solve_increasing(gap, std::log(1e-12), std::log(1e12), 1e-13);
            return std::exp(x);
        }
    };
    return std::visit(visitor{t}, n.payload);
}

// Pointwise sigma-composition value without building a tree.
inline double compose_sigma_value(const mean_function& f, const mean_function& g,
                                  const mean_function& h, double t) {
    const double fv = f(t);
    return fv * h(g(t) / fv);
}

// t with |t^shift f(t) - s| small, found by bisection/secant on
// [1e-12, 1e12]; throws bracket_error when the target is not enclosed.
inline double numeric_inverse(const mean_function& f, double shift, double s) {
    if (!(s > 0.0)) throw std::domain_error("numeric_inverse: s must be positive");
    if (!(shift >= 0.0)) {
        throw std::invalid_argument("numeric_inverse: shift must be >= 0");
    }
    const double log_s = std::log(s);
    const auto gap = [&](double x) {
        return shift * x + std::log(f(std::exp(x))) - log_s;
    };
    return std::exp(solve_increasing(gap, std::log(1e-12), std::log(1e12), 1e-13));
}

}  // namespace meanscope
