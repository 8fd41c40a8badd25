#ifndef MSMFE_SOLVER_HPP
#define MSMFE_SOLVER_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <vector>

#include "msmfe/assembly.hpp"
#include "msmfe/dense.hpp"
#include "msmfe/linsolve.hpp"
#include "msmfe/mesh.hpp"
#include "msmfe/reduction.hpp"

namespace msmfe {

struct SolveStats {
    std::size_t reduced_unknowns = 0;
    std::size_t reduced_nonzeros = 0;
    std::size_t factorizations = 0;
    double assembly_seconds = 0.0;
    double reduction_seconds = 0.0;
    double recovery_seconds = 0.0;
    SolverReport solver;
};

struct SolveResult {
    AssembledSystem system;
    SolutionFields fields;
    SolveStats stats;
};

/// Assembles, reduces to the cell-centered SPD system (u only for MSMFE-1, (u, gamma) for
/// MSMFE-0), solves and recovers all fields.
inline SolveResult solve_problem(const StructuredMesh& mesh, Method method, const ComplianceField& material,
                                 const VectorField& f, const VectorField& g, const SolverOptions& opt = {},
                                 const AssemblyOptions& aopt = {})
{
    using clock = std::chrono::steady_clock;
    auto seconds = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };
    SolveResult res;
    auto t = clock::now();
    res.system = assemble_system(mesh, method, material, f, g, aopt);
    res.stats.assembly_seconds = seconds(t);

    t = clock::now();
    const Reduction red(mesh, res.system);
    const ReducedSystem rs = vertex_rotations(method) ? red.eliminate_rotation() : red.eliminate_stress();
    res.stats.reduction_seconds = seconds(t);
    res.stats.factorizations = red.factorizations();
    res.stats.reduced_unknowns = rs.matrix.rows();
    res.stats.reduced_nonzeros = rs.matrix.nonzeros();

    const auto x = solve_spd(rs.matrix, rs.rhs, opt, &res.stats.solver);
    t = clock::now();
    res.fields = red.recover(rs, x);
    res.stats.recovery_seconds = seconds(t);
    return res;
}

/// Symmetrized saddle-point matrix [A_ss B^T; B 0] with B = [A_su; A_sg], in the unknown
/// order (sigma, u, gamma), and right-hand side [rhs_sigma; f; 0].
inline DenseMatrix saddle_matrix(const AssembledSystem& sys, std::vector<double>* rhs = nullptr)
{
    const std::size_t ns = sys.dofs.num_sigma();
    const std::size_t nu = sys.dofs.num_u();
    const std::size_t ng = sys.dofs.num_gamma();
    const std::size_t n = ns + nu + ng;
    DenseMatrix k(n, n);
    for (std::size_t v = 0; v < sys.ass.blocks.size(); ++v) {
        const std::size_t b = sys.dofs.block_begin(v);
        const auto& blk = sys.ass.blocks[v];
        for (std::size_t i = 0; i < blk.rows(); ++i)
            for (std::size_t j = 0; j < blk.cols(); ++j) k(b + i, b + j) = blk(i, j);
    }
    auto put = [&](const CsrMatrix& m, std::size_t off) {
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t p = m.row_ptr()[r]; p < m.row_ptr()[r + 1]; ++p) {
                k(off + r, m.col_index()[p]) = m.values()[p];
                k(m.col_index()[p], off + r) = m.values()[p];
            }
    };
    put(sys.asu, ns);
    put(sys.asg, ns + nu);
    if (rhs != nullptr) {
        rhs->assign(n, 0.0);
        std::copy(sys.rhs_sigma.begin(), sys.rhs_sigma.end(), rhs->begin());
        std::copy(sys.rhs_u.begin(), sys.rhs_u.end(), rhs->begin() + static_cast<std::ptrdiff_t>(ns));
    }
    return k;
}

/// Dense direct solve of the full saddle-point system; test oracle for small grids.
inline SolutionFields saddle_oracle_solve(const AssembledSystem& sys, std::size_t max_unknowns = 8000)
{
    std::vector<double> rhs;
    const std::size_t n = sys.dofs.num_sigma() + sys.dofs.num_u() + sys.dofs.num_gamma();
    if (n > max_unknowns)
        throw InvalidArgument("saddle oracle limited to " + std::to_string(max_unknowns) + " unknowns, got " +
                              std::to_string(n));
    const DenseMatrix k = saddle_matrix(sys, &rhs);
    const auto x = dense_direct_solve(k, rhs);
    SolutionFields out;
    out.method = sys.method;
    const std::size_t ns = sys.dofs.num_sigma();
    const std::size_t nu = sys.dofs.num_u();
    out.sigma.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(ns));
    out.u.assign(x.begin() + static_cast<std::ptrdiff_t>(ns), x.begin() + static_cast<std::ptrdiff_t>(ns + nu));
    out.gamma.assign(x.begin() + static_cast<std::ptrdiff_t>(ns + nu), x.end());
    return out;
}

/// max |a - b| / max |b| (0 when both vanish).
inline double relative_difference(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0.0, s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        s = std::max(s, std::abs(b[i]));
    }
    return s > 0.0 ? d / s : d;
}

/// Residuals of the enforced discrete equations, each scaled by the magnitude of its terms.
struct EquationResiduals {
    double stress = 0.0;        ///< A_ss sigma + A_su^T u + A_sg^T gamma = rhs_sigma
    double conservation = 0.0;  ///< A_su sigma = f (cell averages of f equal div sigma_h)
    double symmetry = 0.0;      ///< A_sg sigma = 0 in the method-appropriate form
};

inline EquationResiduals equation_residuals(const AssembledSystem& sys, const SolutionFields& s)
{
    EquationResiduals out;
    auto scaled_rows = [](const CsrMatrix& m, const std::vector<double>& x, const std::vector<double>* rhs) {
        double res = 0.0, scale = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            double v = 0.0, a = 0.0;
            for (std::size_t p = m.row_ptr()[r]; p < m.row_ptr()[r + 1]; ++p) {
                v += m.values()[p] * x[m.col_index()[p]];
                a += std::abs(m.values()[p] * x[m.col_index()[p]]);
            }
            if (rhs != nullptr) {
                v -= (*rhs)[r];
                a += std::abs((*rhs)[r]);
            }
            res = std::max(res, std::abs(v));
            scale = std::max(scale, a);
        }
        return scale > 0.0 ? res / scale : res;
    };
    out.conservation = scaled_rows(sys.asu, s.sigma, &sys.rhs_u);
    out.symmetry = scaled_rows(sys.asg, s.sigma, nullptr);

    std::vector<double> r(sys.rhs_sigma);
    std::vector<double> mag(r.size(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) mag[i] = std::abs(r[i]);
    for (std::size_t v = 0; v < sys.ass.blocks.size(); ++v) {
        const std::size_t b = sys.dofs.block_begin(v);
        const auto& blk = sys.ass.blocks[v];
        for (std::size_t i = 0; i < blk.rows(); ++i)
            for (std::size_t j = 0; j < blk.cols(); ++j) {
                r[b + i] -= blk(i, j) * s.sigma[b + j];
                mag[b + i] += std::abs(blk(i, j) * s.sigma[b + j]);
            }
    }
    auto sub_t = [&](const CsrMatrix& m, const std::vector<double>& x) {
        for (std::size_t row = 0; row < m.rows(); ++row)
            for (std::size_t p = m.row_ptr()[row]; p < m.row_ptr()[row + 1]; ++p) {
                r[m.col_index()[p]] -= m.values()[p] * x[row];
                mag[m.col_index()[p]] += std::abs(m.values()[p] * x[row]);
            }
    };
    sub_t(sys.asu, s.u);
    sub_t(sys.asg, s.gamma);
    double res = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        res = std::max(res, std::abs(r[i]));
        scale = std::max(scale, mag[i]);
    }
    out.stress = scale > 0.0 ? res / scale : res;
    return out;
}

}  // namespace msmfe

#endif  // MSMFE_SOLVER_HPP
