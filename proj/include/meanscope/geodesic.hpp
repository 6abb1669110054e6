#pragma once

// Probability measures on [0,1] driving geodesic means
//   f(t) = INT_0^1 t^alpha dp(alpha),
// stored as point atoms plus an optional continuous density integrated with
// a fixed 64-node Gauss-Legendre rule.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "meanscope/quadrature.hpp"

namespace meanscope {

struct geodesic_atom {
    double weight;
    double exponent;
};

class geodesic_measure {
  public:
    explicit geodesic_measure(std::vector<geodesic_atom> atoms)
        : atoms_(std::move(atoms)) {
        validate();
    }

    geodesic_measure(std::vector<geodesic_atom> atoms,
                     std::function<double(double)> density)
        : atoms_(std::move(atoms)), density_(std::move(density)) {
        validate();
    }

    static geodesic_measure point_mass(double exponent) {
        return geodesic_measure({{1.0, exponent}});
    }

    // Lebesgue measure on [0,1]; the induced mean is (t-1)/log t.
    static geodesic_measure uniform() {
        return geodesic_measure({}, [](double) { return 1.0; });
    }

    double operator()(double t) const {
        if (!(t > 0.0)) {
            throw std::domain_error("geodesic_measure: t must be positive");
        }
        const double log_t = std::log(t);
        double sum = 0.0;
        for (const geodesic_atom& a : atoms_) {
            sum += a.weight * std::exp(a.exponent * log_t);
        }
        if (density_) {
            sum += integrate_01_gl64([&](double alpha) {
                return density_(alpha) * std::exp(alpha * log_t);
            });
        }
        return sum;
    }

    const std::vector<geodesic_atom>& atoms() const { return atoms_; }
    bool has_density() const { return static_cast<bool>(density_); }

  private:
    void validate() const {
        double mass = 0.0;
        for (const geodesic_atom& a : atoms_) {
            if (!(a.weight >= 0.0)) {
                throw std::invalid_argument("geodesic_measure: negative weight");
            }
            if (!(a.exponent >= 0.0 && a.exponent <= 1.0)) {
                throw std::invalid_argument(
                    "geodesic_measure: exponent outside [0,1]");
            }
            mass += a.weight;
        }
        if (density_) {
            mass += integrate_01_gl64(density_);
        }
        if (std::abs(mass - 1.0) > 1e-12) {
            throw std::invalid_argument(
                "geodesic_measure: total mass must be 1");
        }
    }

    std::vector<geodesic_atom> atoms_;
    std::function<double(double)> density_;
};

}  // namespace meanscope
