#pragma once

// Randomized falsifier for the implication
//   A, B > 0,  A sigma_f B >= I   =>   A^p sigma_f B^p >= I   (p > 1),
// which holds exactly when f is power monotone increasing. A deterministic
// scalar probe (the 1x1 case, driven by the pmi criterion on a log grid)
// runs before the random matrix phase; random pairs are orthogonal
// conjugations of log-uniform spectra, rescaled so min-eig(A sigma B) = 1
// is tight.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "meanscope/classify.hpp"
#include "meanscope/matrix.hpp"
#include "meanscope/mean_function.hpp"

namespace meanscope {

struct ando_hiai_witness {
    dense_matrix a;
    dense_matrix b;
    double p = 2.0;
    double min_eig_before = 0.0;  // of A sigma B - I
    double min_eig_after = 0.0;   // of A^p sigma B^p - I
    std::string phase;            // "scalar_probe" or "random"
    long trial_index = -1;        // -1 for the scalar probe
    std::uint64_t seed = 0;
    std::optional<double> probe_t;
};

struct ando_hiai_config {
    double p = 2.0;
    int trials = 10000;
    int dim = 3;
    std::uint64_t seed = 7;
    double witness_tol = 1e-8;
    double eig_min = 1e-4;
    double eig_max = 1e4;
    grid_spec probe_grid;

    void validate() const {
        if (!(p > 1.0)) throw std::invalid_argument("ando_hiai: p must be > 1");
        if (trials < 1) throw std::invalid_argument("ando_hiai: trials < 1");
        if (dim < 1) throw std::invalid_argument("ando_hiai: dim < 1");
        if (!(eig_min > 0.0) || !(eig_max > eig_min)) {
            throw std::invalid_argument("ando_hiai: bad eigenvalue range");
        }
    }
};

namespace detail {

// Random orthogonal matrix: Gaussian entries, modified Gram-Schmidt with one
// re-orthogonalization pass.
inline dense_matrix random_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    dense_matrix q(n, n);
    for (int j = 0; j < n; ++j) {
        for (int pass = 0;; ++pass) {
            for (int i = 0; i < n; ++i) q(i, j) = gauss(rng);
            for (int rep = 0; rep < 2; ++rep) {
                for (int k = 0; k < j; ++k) {
                    double dot = 0.0;
                    for (int i = 0; i < n; ++i) dot += q(i, k) * q(i, j);
                    for (int i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
                }
            }
            double norm = 0.0;
            for (int i = 0; i < n; ++i) norm += q(i, j) * q(i, j);
            norm = std::sqrt(norm);
            if (norm > 1e-8) {
                for (int i = 0; i < n; ++i) q(i, j) /= norm;
                break;
            }
            if (pass > 16) throw std::runtime_error("random_orthogonal: degenerate");
        }
    }
    return q;
}

inline positive_matrix random_pd(int n, double eig_min, double eig_max,
                                 std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(std::log(eig_min),
                                                std::log(eig_max));
    std::vector<double> lambda(static_cast<std::size_t>(n));
    for (double& v : lambda) v = std::exp(unif(rng));
    return positive_matrix::from_spectral(random_orthogonal(n, rng), lambda);
}

}  // namespace detail

// Deterministic dimension-1 search: a grid scan of
// log f(t^p) - p log f(t), sharpened by golden-section search. A negative
// margin at t yields the exact scalar witness A = c/f(t), B = c t/f(t).
inline std::optional<ando_hiai_witness> scalar_probe(const mean_function& f,
                                                     const ando_hiai_config& cfg) {
    const std::vector<double> xs = cfg.probe_grid.log_points();
    const auto margin = [&](double x) {
        return std::log(f(std::exp(cfg.p * x))) - cfg.p * std::log(f(std::exp(x)));
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
    if (worst >= -cfg.witness_tol) return std::nullopt;
    const double lo = worst_i == 0 ? xs.front() : xs[worst_i - 1];
    const double hi = worst_i + 1 == xs.size() ? xs.back() : xs[worst_i + 1];
    const double x_star = golden_section_min(margin, lo, hi);
    const double t_star = std::exp(x_star);

    // Tiny positive margin keeps min_eig_before nonnegative under roundoff.
    const double c = 1.0 + 1e-10;
    dense_matrix a(1, 1), b(1, 1);
    a(0, 0) = c / f(t_star);
    b(0, 0) = c * t_star / f(t_star);

    ando_hiai_witness w;
    w.a = a;
    w.b = b;
    w.p = cfg.p;
    w.phase = "scalar_probe";
    w.seed = cfg.seed;
    w.probe_t = t_star;
    w.min_eig_before = a(0, 0) * f(b(0, 0) / a(0, 0)) - 1.0;
    const double ap = std::pow(a(0, 0), cfg.p);
    const double bp = std::pow(b(0, 0), cfg.p);
    w.min_eig_after = ap * f(bp / ap) - 1.0;
    if (w.min_eig_after < -cfg.witness_tol) return w;
    return std::nullopt;
}

inline std::optional<ando_hiai_witness> ando_hiai_search(
    const mean_function& f, const ando_hiai_config& cfg = {}) {
    cfg.validate();

    if (auto w = scalar_probe(f, cfg)) return w;

    std::mt19937_64 rng(cfg.seed);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const positive_matrix a0 =
            detail::random_pd(cfg.dim, cfg.eig_min, cfg.eig_max, rng);
        const positive_matrix b0 =
            detail::random_pd(cfg.dim, cfg.eig_min, cfg.eig_max, rng);
        const double base = operator_mean(f, a0, b0).min_eigenvalue();
        // Means are positively homogeneous, so scaling both arguments by c
        // scales A sigma B by c; pick c to make the hypothesis tight.
        const double c = (1.0 + 1e-6) / base;
        const positive_matrix a = a0.scaled(c);
        const positive_matrix b = b0.scaled(c);
        const double before = operator_mean(f, a, b).min_eigenvalue() - 1.0;
        if (before < 0.0) continue;  // rescale lost tightness to roundoff
        const positive_matrix after_m =
            operator_mean(f, a.power(cfg.p), b.power(cfg.p));
        const double after = after_m.min_eigenvalue() - 1.0;
        // p-powers square the condition numbers; a violation only counts
        // when it clears the eigensolver noise at the matrix's scale.
        const double noise_scale =
            after_m.max_eigenvalue() * cfg.dim * 1e-14;
        if (after < -std::max(cfg.witness_tol, noise_scale)) {
            ando_hiai_witness w;
            w.a = a.matrix();
            w.b = b.matrix();
            w.p = cfg.p;
            w.min_eig_before = before;
            w.min_eig_after = after;
            w.phase = "random";
            w.trial_index = trial;
            w.seed = cfg.seed;
            return w;
        }
    }
    return std::nullopt;
}

}  // namespace meanscope
