#ifndef MSMFE_DENSE_HPP
#define MSMFE_DENSE_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "msmfe/errors.hpp"

namespace msmfe {

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value)
    {
    }

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

    [[nodiscard]] DenseMatrix transposed() const
    {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const
    {
        assert(x.size() == cols_);
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* r = data_.data() + i * cols_;
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
            y[i] = s;
        }
        return y;
    }

    [[nodiscard]] double max_asymmetry() const
    {
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
        return m;
    }

    [[nodiscard]] double max_abs() const
    {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b)
{
    assert(a.cols() == b.rows());
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

/// Cholesky factor of a small SPD matrix, stored packed (lower triangle, row by row).
class PackedCholesky {
public:
    PackedCholesky() = default;

    /// Factors the symmetric matrix whose lower triangle is read from `a`.
    /// Returns false if a non-positive pivot is met.
    bool factor(const DenseMatrix& a)
    {
        n_ = a.rows();
        l_.assign(n_ * (n_ + 1) / 2, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = a(i, j);
                const double* li = &l_[offset(i)];
                const double* lj = &l_[offset(j)];
                for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
                if (i == j) {
                    if (!(s > 0.0) || !std::isfinite(s)) return false;
                    l_[offset(i) + i] = std::sqrt(s);
                } else {
                    l_[offset(i) + j] = s / l_[offset(j) + j];
                }
            }
        }
        return true;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// In-place solve L L^T x = b.
    void solve_in_place(std::span<double> b) const
    {
        assert(b.size() == n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const double* li = &l_[offset(i)];
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= li[k] * b[k];
            b[i] = s / li[i];
        }
        for (std::size_t ii = n_; ii-- > 0;) {
            double s = b[ii];
            for (std::size_t k = ii + 1; k < n_; ++k) s -= l_[offset(k) + ii] * b[k];
            b[ii] = s / l_[offset(ii) + ii];
        }
    }

    [[nodiscard]] double min_pivot() const
    {
        double m = n_ ? l_[0] : 0.0;
        for (std::size_t i = 0; i < n_; ++i) m = std::min(m, l_[offset(i) + i]);
        return m;
    }

private:
    static std::size_t offset(std::size_t i) { return i * (i + 1) / 2; }

    std::size_t n_ = 0;
    std::vector<double> l_;
};

/// LU factorization with partial pivoting, for general (including symmetric indefinite) systems.
class LuFactorization {
public:
    explicit LuFactorization(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.rows())
    {
        const std::size_t n = lu_.rows();
        assert(lu_.cols() == n);
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        double scale = lu_.max_abs();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                const double v = std::abs(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (!(best > scale * 1e-20)) {
                throw SolverError("LU factorization: matrix is numerically singular at column " + std::to_string(k));
            }
            if (p != k) {
                std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
                std::swap(perm_[k], perm_[p]);
            }
            const double pivot = lu_(k, k);
            const double* rk = lu_.row(k).data();
            for (std::size_t i = k + 1; i < n; ++i) {
                double* ri = lu_.row(i).data();
                const double m = ri[k] / pivot;
                ri[k] = m;
                if (m == 0.0) continue;
                for (std::size_t j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
            }
        }
    }

    [[nodiscard]] std::vector<double> solve(std::span<const double> b) const
    {
        const std::size_t n = lu_.rows();
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n; ++i) {
            const double* ri = lu_.row(i).data();
            double s = x[i];
            for (std::size_t k = 0; k < i; ++k) s -= ri[k] * x[k];
            x[i] = s;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            const double* ri = lu_.row(ii).data();
            double s = x[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= ri[k] * x[k];
            x[ii] = s / ri[ii];
        }
        return x;
    }

    [[nodiscard]] DenseMatrix inverse() const
    {
        const std::size_t n = lu_.rows();
        DenseMatrix inv(n, n);
        std::vector<double> e(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            std::fill(e.begin(), e.end(), 0.0);
            e[j] = 1.0;
            auto col = solve(e);
            for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        }
        return inv;
    }

    [[nodiscard]] double determinant() const
    {
        const std::size_t n = lu_.rows();
        double d = 1.0;
        for (std::size_t i = 0; i < n; ++i) d *= lu_(i, i);
        // sign of the permutation
        std::vector<std::size_t> p = perm_;
        for (std::size_t i = 0; i < n; ++i) {
            while (p[i] != i) {
                std::swap(p[i], p[p[i]]);
                d = -d;
            }
        }
        return d;
    }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> symmetric_eigenvalues(DenseMatrix a, int max_sweeps = 100)
{
    const std::size_t n = a.rows();
    assert(a.cols() == n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        double diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diag += a(i, i) * a(i, i);
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (off <= 1e-30 * std::max(diag, 1e-300)) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Singular values of a rectangular matrix by one-sided Jacobi rotations, descending.
inline std::vector<double> singular_values(const DenseMatrix& m, int max_sweeps = 60)
{
    DenseMatrix a = m.rows() >= m.cols() ? m : m.transposed();
    const std::size_t rows = a.rows();
    const std::size_t n = a.cols();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t k = 0; k < rows; ++k) {
                    alpha += a(k, p) * a(k, p);
                    beta += a(k, q) * a(k, q);
                    gamma += a(k, p) * a(k, q);
                }
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || gamma == 0.0) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < rows; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < rows; ++k) s += a(k, j) * a(k, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

/// Numerical rank with a relative singular-value threshold.
inline std::size_t numerical_rank(const DenseMatrix& a, double rel_tol = 1e-10)
{
    const auto sv = singular_values(a);
    if (sv.empty() || sv.front() == 0.0) return 0;
    return static_cast<std::size_t>(
        std::count_if(sv.begin(), sv.end(), [&](double s) { return s > rel_tol * sv.front(); }));
}

}  // namespace msmfe

#endif  // MSMFE_DENSE_HPP
