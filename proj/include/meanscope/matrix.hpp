#pragma once

// Dense matrix layer for desk-scale experiments: a small row-major matrix
// type, a cyclic Jacobi eigensolver for symmetric matrices, positive-definite
// matrices with a cached spectral decomposition, functional calculus, the
// operator mean A sigma_f B and the congruence (transformer) check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "meanscope/mean_function.hpp"

namespace meanscope {

class dense_matrix {
  public:
    dense_matrix() = default;
    dense_matrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          e_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        if (rows < 1 || cols < 1) {
            throw std::invalid_argument("dense_matrix: bad shape");
        }
    }

    static dense_matrix identity(int n) {
        dense_matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) {
        return e_[static_cast<std::size_t>(i) * cols_ + j];
    }
    double operator()(int i, int j) const {
        return e_[static_cast<std::size_t>(i) * cols_ + j];
    }

    const std::vector<double>& entries() const { return e_; }
    std::vector<double>& entries() { return e_; }

    dense_matrix transposed() const {
        dense_matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    friend dense_matrix operator*(const dense_matrix& a, const dense_matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matmul: shape");
        dense_matrix r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        }
        return r;
    }

    friend dense_matrix operator+(const dense_matrix& a, const dense_matrix& b) {
        check_same_shape(a, b);
        dense_matrix r = a;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
        return r;
    }

    friend dense_matrix operator-(const dense_matrix& a, const dense_matrix& b) {
        check_same_shape(a, b);
        dense_matrix r = a;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
        return r;
    }

    dense_matrix scaled(double c) const {
        dense_matrix r = *this;
        for (double& v : r.e_) v *= c;
        return r;
    }

    dense_matrix symmetrized() const {
        if (rows_ != cols_) throw std::invalid_argument("symmetrized: not square");
        dense_matrix r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                r(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : e_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : e_) s += v * v;
        return std::sqrt(s);
    }

  private:
    static void check_same_shape(const dense_matrix& a, const dense_matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
            throw std::invalid_argument("dense_matrix: shape mismatch");
        }
    }

    int rows_ = 0, cols_ = 0;
    std::vector<double> e_;
};

struct eigen_decomposition {
    std::vector<double> values;  // ascending
    dense_matrix vectors;        // columns are eigenvectors
};

// Cyclic Jacobi rotations on a symmetric matrix, sweeping until the
// off-diagonal Frobenius norm falls below off_tol relative to the input.
inline eigen_decomposition jacobi_eigen(const dense_matrix& m,
                                        double off_tol = 1e-13,
                                        int max_sweeps = 100) {
    if (m.rows() != m.cols()) throw std::invalid_argument("jacobi: not square");
    const int n = m.rows();
    dense_matrix a = m.symmetrized();
    dense_matrix q = dense_matrix::identity(n);
    const double scale = std::max(a.frobenius_norm(), 1e-300);

    const auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    int sweep = 0;
    while (off_norm() > off_tol * scale) {
        if (++sweep > max_sweeps) {
            throw std::runtime_error("jacobi_eigen: sweep cap exceeded");
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                if (std::abs(apr) <= 1e-300) continue;
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double tangent =
                    sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tangent * tangent + 1.0);
                const double s = tangent * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akr = a(k, r);
                    a(k, p) = c * akp - s * akr;
                    a(k, r) = s * akp + c * akr;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double ark = a(r, k);
                    a(p, k) = c * apk - s * ark;
                    a(r, k) = s * apk + c * ark;
                }
                for (int k = 0; k < n; ++k) {
                    const double qkp = q(k, p);
                    const double qkr = q(k, r);
                    q(k, p) = c * qkp - s * qkr;
                    q(k, r) = s * qkp + c * qkr;
                }
            }
        }
    }

    // Sort ascending, carrying the eigenvector columns along.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < n; ++i) {
        int best = i;
        for (int j = i + 1; j < n; ++j) {
            if (a(order[static_cast<std::size_t>(j)],
                  order[static_cast<std::size_t>(j)]) <
                a(order[static_cast<std::size_t>(best)],
                  order[static_cast<std::size_t>(best)])) {
                best = j;
            }
        }
        std::swap(order[static_cast<std::size_t>(i)],
                  order[static_cast<std::size_t>(best)]);
    }

    eigen_decomposition dec;
    dec.values.resize(static_cast<std::size_t>(n));
    dec.vectors = dense_matrix(n, n);
    for (int i = 0; i < n; ++i) {
        const int src = order[static_cast<std::size_t>(i)];
        dec.values[static_cast<std::size_t>(i)] = a(src, src);
        for (int k = 0; k < n; ++k) dec.vectors(k, i) = q(k, src);
    }
    return dec;
}

inline double min_eigenvalue_sym(const dense_matrix& m) {
    return jacobi_eigen(m).values.front();
}

// Real symmetric strictly positive-definite matrix with its spectral
// decomposition cached at construction. Construction validates symmetry,
// positivity and the QLQ^T reconstruction.
class positive_matrix {
  public:
    explicit positive_matrix(const dense_matrix& m) {
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("positive_matrix: not square");
        }
        const double scale = m.max_abs();
        for (int i = 0; i < m.rows(); ++i) {
            for (int j = i + 1; j < m.cols(); ++j) {
                if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(scale, 1e-300)) {
                    throw std::invalid_argument("positive_matrix: not symmetric");
                }
            }
        }
        m_ = m.symmetrized();
        eigen_decomposition dec = jacobi_eigen(m_);
        if (!(dec.values.front() > 0.0)) {
            throw std::invalid_argument("positive_matrix: not positive definite");
        }
        values_ = std::move(dec.values);
        vectors_ = std::move(dec.vectors);
        check_reconstruction();
    }

    // For matrices that are positive definite by construction (congruences
    // of definite matrices) but whose smallest eigenvalues can fall below
    // the resolution of the eigensolver: eigenvalues are clamped at the
    // decomposition noise floor instead of rejecting the matrix.
    static positive_matrix from_psd_construction(const dense_matrix& m,
                                                 double rel_floor = 1e-13) {
        eigen_decomposition dec = jacobi_eigen(m.symmetrized());
        const double top = std::max(dec.values.back(), 1e-300);
        for (double& v : dec.values) v = std::max(v, top * rel_floor);
        return from_spectral(dec.vectors, dec.values);
    }

    // Q must have orthonormal columns and all lambda > 0; used by generators
    // that already know the spectral data.
    static positive_matrix from_spectral(const dense_matrix& q,
                                         const std::vector<double>& lambda) {
        if (q.rows() != q.cols() ||
            lambda.size() != static_cast<std::size_t>(q.rows())) {
            throw std::invalid_argument("from_spectral: shape mismatch");
        }
        for (double v : lambda) {
            if (!(v > 0.0)) {
                throw std::invalid_argument("from_spectral: eigenvalue <= 0");
            }
        }
        positive_matrix a;
        a.vectors_ = q;
        a.values_ = lambda;
        a.m_ = compose(q, lambda).symmetrized();
        a.sort_spectral();
        a.check_reconstruction();
        return a;
    }

    int dim() const { return m_.rows(); }
    const dense_matrix& matrix() const { return m_; }
    const std::vector<double>& eigenvalues() const { return values_; }
    const dense_matrix& eigenvectors() const { return vectors_; }
    double min_eigenvalue() const { return values_.front(); }
    double max_eigenvalue() const { return values_.back(); }
    double condition_number() const { return values_.back() / values_.front(); }

    // Q g(L) Q^T for a scalar map g applied to the eigenvalues.
    template <class G>
    positive_matrix spectral_map(G&& g) const {
        std::vector<double> mapped(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) {
            mapped[i] = g(values_[i]);
            if (!(mapped[i] > 0.0) || !std::isfinite(mapped[i])) {
                throw std::runtime_error(
                    "spectral_map: mapped eigenvalue not positive finite");
            }
        }
        return from_spectral(vectors_, mapped);
    }

    positive_matrix power(double p) const {
        return spectral_map([p](double x) { return std::pow(x, p); });
    }

    positive_matrix shifted(double eps) const {
        if (eps == 0.0) return *this;
        return spectral_map([eps](double x) { return x + eps; });
    }

    positive_matrix scaled(double c) const {
        if (!(c > 0.0)) throw std::invalid_argument("scaled: c must be > 0");
        return spectral_map([c](double x) { return c * x; });
    }

  private:
    positive_matrix() = default;

    static dense_matrix compose(const dense_matrix& q,
                                const std::vector<double>& lambda) {
        const int n = q.rows();
        dense_matrix r(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) {
                    s += q(i, k) * lambda[static_cast<std::size_t>(k)] * q(j, k);
                }
                r(i, j) = s;
            }
        }
        return r;
    }

    void sort_spectral() {
        const int n = m_.rows();
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            return values_[static_cast<std::size_t>(x)] <
                   values_[static_cast<std::size_t>(y)];
        });
        std::vector<double> sorted_values(static_cast<std::size_t>(n));
        dense_matrix sorted_vectors(n, n);
        for (int i = 0; i < n; ++i) {
            const int src = order[static_cast<std::size_t>(i)];
            sorted_values[static_cast<std::size_t>(i)] =
                values_[static_cast<std::size_t>(src)];
            for (int k = 0; k < n; ++k) sorted_vectors(k, i) = vectors_(k, src);
        }
        values_ = std::move(sorted_values);
        vectors_ = std::move(sorted_vectors);
    }

    void check_reconstruction() const {
        const dense_matrix rebuilt = compose(vectors_, values_);
        const double err = (rebuilt - m_).frobenius_norm();
        if (err > 1e-9 * std::max(m_.frobenius_norm(), 1e-300)) {
            throw std::runtime_error("positive_matrix: reconstruction failed");
        }
    }

    dense_matrix m_;
    std::vector<double> values_;
    dense_matrix vectors_;
};

// f applied through the spectral decomposition: Q f(L) Q^T.
inline positive_matrix apply_function(const mean_function& f,
                                      const positive_matrix& a) {
    return a.spectral_map([&](double x) { return f(x); });
}

struct mean_diagnostics {
    double condition_number = 1.0;
    bool ill_conditioned = false;
};

// A sigma_f B = A_eps^{1/2} f(A_eps^{-1/2} B_eps A_eps^{-1/2}) A_eps^{1/2}.
// eps >= 0 adds the ridge A + eps I, B + eps I before the congruence.
inline positive_matrix operator_mean(const mean_function& f,
                                     const positive_matrix& a,
                                     const positive_matrix& b, double eps = 0.0,
                                     mean_diagnostics* diag = nullptr) {
    if (a.dim() != b.dim()) throw std::invalid_argument("operator_mean: dims");
    if (!(eps >= 0.0)) throw std::invalid_argument("operator_mean: eps < 0");
    const positive_matrix a_eps = a.shifted(eps);
    const positive_matrix b_eps = b.shifted(eps);
    if (diag) {
        diag->condition_number = a_eps.condition_number();
        diag->ill_conditioned = diag->condition_number > 1e12;
    }
    const positive_matrix a_sqrt = a_eps.power(0.5);
    const positive_matrix a_isqrt = a_eps.power(-0.5);
    // Congruences of definite matrices stay definite; clamp at the
    // eigensolver noise floor rather than reject wide spectra.
    const positive_matrix inner = positive_matrix::from_psd_construction(
        a_isqrt.matrix() * b_eps.matrix() * a_isqrt.matrix());
    const positive_matrix mapped = apply_function(f, inner);
    return positive_matrix::from_psd_construction(
        a_sqrt.matrix() * mapped.matrix() * a_sqrt.matrix());
}

// Determinant by partial-pivot Gaussian elimination; used to reject
// singular transformer matrices.
inline double determinant(dense_matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: shape");
    const int n = m.rows();
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
        }
        if (std::abs(m(pivot, col)) < 1e-300) return 0.0;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double factor = m(r, col) / m(col, col);
            for (int j = col; j < n; ++j) m(r, j) -= factor * m(col, j);
        }
    }
    return det;
}

// Minimum eigenvalue of (T^T A T) sigma (T^T B T) - T^T (A sigma B) T.
// The transformer axiom makes this >= 0, with equality for invertible T.
inline double transformer_check(const mean_function& f, const positive_matrix& a,
                                const positive_matrix& b,
                                const dense_matrix& t) {
    if (t.rows() != a.dim() || t.cols() != a.dim()) {
        throw std::invalid_argument("transformer_check: T shape");
    }
    const double det = determinant(t);
    const double scale = std::pow(std::max(t.max_abs(), 1e-300), t.rows());
    if (std::abs(det) < 1e-12 * scale) {
        throw std::invalid_argument("transformer_check: T is singular");
    }
    const dense_matrix tt = t.transposed();
    const positive_matrix tat((tt * a.matrix() * t).symmetrized());
    const positive_matrix tbt((tt * b.matrix() * t).symmetrized());
    const dense_matrix lhs = operator_mean(f, tat, tbt).matrix();
    const dense_matrix rhs = tt * operator_mean(f, a, b).matrix() * t;
    return min_eigenvalue_sym(lhs - rhs.symmetrized());
}

// --- plain-text I/O: dimension line, then row-major entries ---------------

inline void write_matrix_text(std::ostream& os, const dense_matrix& m) {
    os << m.rows() << "\n";
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            os << (j ? " " : "");
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            os << buf;
        }
        os << "\n";
    }
}

inline dense_matrix read_matrix_text(std::istream& is) {
    int dim = 0;
    if (!(is >> dim) || dim < 1) {
        throw std::invalid_argument("read_matrix_text: bad dimension");
    }
    dense_matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            if (!(is >> m(i, j))) {
                throw std::invalid_argument("read_matrix_text: missing entry");
            }
        }
    }
    return m;
}

}  // namespace meanscope
