#ifndef MSMFE_LINSOLVE_HPP
#define MSMFE_LINSOLVE_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "msmfe/dense.hpp"
#include "msmfe/errors.hpp"
#include "msmfe/sparse.hpp"

namespace msmfe {

struct SolverReport {
    std::string method;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    double seconds = 0.0;
};

enum class SolverKind { automatic, cg, pcg, direct };

inline std::string solver_name(SolverKind k)
{
    switch (k) {
        case SolverKind::automatic: return "auto";
        case SolverKind::cg: return "cg";
        case SolverKind::pcg: return "pcg";
        case SolverKind::direct: return "direct";
    }
    return "?";
}

inline SolverKind parse_solver(const std::string& s)
{
    if (s == "auto") return SolverKind::automatic;
    if (s == "cg") return SolverKind::cg;
    if (s == "pcg") return SolverKind::pcg;
    if (s == "direct") return SolverKind::direct;
    throw InvalidArgument("unknown solver '" + s + "' (expected auto, cg, pcg or direct)");
}

struct SolverOptions {
    SolverKind kind = SolverKind::automatic;
    double tol = 1e-12;
    std::size_t maxit = 0;               ///< 0: 10 * dimension
    std::size_t direct_limit = 15000;    ///< automatic: direct up to this many unknowns, else PCG

    bool operator==(const SolverOptions&) const = default;
};

namespace detail {

inline double norm2(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

/// Conjugate gradients, optionally with a diagonal preconditioner. Throws on
/// non-convergence and on non-positive curvature.
inline std::vector<double> cg_solve(const CsrMatrix& a, std::span<const double> b, double tol, std::size_t maxit,
                                    bool jacobi = false, SolverReport* report = nullptr)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (!(tol > 0.0)) throw InvalidArgument("CG tolerance must be positive");
    const std::size_t n = a.rows();
    if (b.size() != n) throw InvalidArgument("CG right-hand side has wrong size");
    if (maxit == 0) maxit = 10 * n + 10;
    std::vector<double> x(n, 0.0), r(b.begin(), b.end()), z(n), p(n), q(n);
    std::vector<double> dinv(n, 1.0);
    if (jacobi) {
        const auto d = a.diagonal();
        for (std::size_t i = 0; i < n; ++i) {
            if (!(d[i] > 0.0)) throw SolverError("Jacobi preconditioner: non-positive diagonal at row " + std::to_string(i));
            dinv[i] = 1.0 / d[i];
        }
    }
    const double bnorm = detail::norm2(b);
    SolverReport rep{jacobi ? "pcg" : "cg", 0, 0.0, 0.0};
    auto finish = [&] {
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (report != nullptr) *report = rep;
    };
    if (bnorm == 0.0) {
        finish();
        return x;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    p = z;
    double rz = detail::dot(r, z);
    for (std::size_t it = 1; it <= maxit; ++it) {
        a.multiply(p, q);
        const double pq = detail::dot(p, q);
        if (!(pq > 0.0)) throw SolverError("CG detected non-positive curvature at iteration " + std::to_string(it));
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        rep.iterations = it;
        rep.relative_residual = detail::norm2(r) / bnorm;
        if (rep.relative_residual <= tol) {
            // confirm with the true residual
            const auto ax = a.multiply(x);
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += (b[i] - ax[i]) * (b[i] - ax[i]);
            rep.relative_residual = std::sqrt(s) / bnorm;
            if (rep.relative_residual <= tol) {
                finish();
                return x;
            }
            for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        const double rz_new = detail::dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    finish();
    throw SolverError("CG did not converge in " + std::to_string(maxit) + " iterations (relative residual " +
                      std::to_string(rep.relative_residual) + ")");
}

inline Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& a)
{
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(a.nonzeros());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p)
            t.emplace_back(static_cast<int>(r), static_cast<int>(a.col_index()[p]), a.values()[p]);
    Eigen::SparseMatrix<double> m(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

/// Sparse Cholesky factorization; throws NotPositiveDefinite if it breaks down.
class SparseCholesky {
public:
    explicit SparseCholesky(const CsrMatrix& a)
    {
        const auto m = to_eigen(a);
        llt_.compute(m);
        if (llt_.info() != Eigen::Success)
            throw NotPositiveDefinite("sparse Cholesky factorization failed: matrix is not positive definite", -1);
    }

    [[nodiscard]] std::vector<double> solve(std::span<const double> b) const
    {
        Eigen::Map<const Eigen::VectorXd> bb(b.data(), static_cast<Eigen::Index>(b.size()));
        Eigen::VectorXd x = llt_.solve(bb);
        return {x.data(), x.data() + x.size()};
    }

private:
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

/// True if the sparse Cholesky factorization succeeds.
inline bool cholesky_certificate(const CsrMatrix& a)
{
    try {
        SparseCholesky ch(a);
        return true;
    } catch (const NotPositiveDefinite&) {
        return false;
    }
}

inline std::vector<double> direct_solve(const CsrMatrix& a, std::span<const double> b, SolverReport* report = nullptr)
{
    const auto t0 = std::chrono::steady_clock::now();
    SparseCholesky ch(a);
    auto x = ch.solve(b);
    const double bn = detail::norm2(b);
    std::vector<double> r(b.size());
    double rel = 0.0;
    std::size_t steps = 1;
    // a few sweeps of iterative refinement for ill-conditioned (near-incompressible) systems
    for (;; ++steps) {
        const auto ax = a.multiply(x);
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - ax[i];
        rel = bn > 0.0 ? detail::norm2(r) / bn : 0.0;
        if (rel <= 1e-14 || steps > 3) break;
        const auto dx = ch.solve(r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    }
    if (report != nullptr) {
        report->method = "direct";
        report->iterations = steps;
        report->relative_residual = rel;
        report->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return x;
}

/// Solves an SPD system with the configured backend.
inline std::vector<double> solve_spd(const CsrMatrix& a, std::span<const double> b, const SolverOptions& opt,
                                     SolverReport* report = nullptr)
{
    SolverKind kind = opt.kind;
    if (kind == SolverKind::automatic) {
        if (a.rows() <= opt.direct_limit) return direct_solve(a, b, report);
        try {
            return cg_solve(a, b, opt.tol, opt.maxit, true, report);
        } catch (const SolverError&) {
            // stagnation on very ill-conditioned systems; the factorization is robust there
            return direct_solve(a, b, report);
        }
    }
    switch (kind) {
        case SolverKind::direct: return direct_solve(a, b, report);
        case SolverKind::cg: return cg_solve(a, b, opt.tol, opt.maxit, false, report);
        default: return cg_solve(a, b, opt.tol, opt.maxit, true, report);
    }
}

/// Direct solve of a dense (possibly indefinite) system by partial-pivoting LU.
inline std::vector<double> dense_direct_solve(const DenseMatrix& k, std::span<const double> rhs)
{
    LuFactorization lu(k);
    return lu.solve(rhs);
}

}  // namespace msmfe

#endif  // MSMFE_LINSOLVE_HPP
