#ifndef MSMFE_REDUCTION_HPP
#define MSMFE_REDUCTION_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <string>
#include <vector>

#include "msmfe/assembly.hpp"
#include "msmfe/dense.hpp"
#include "msmfe/errors.hpp"
#include "msmfe/mesh.hpp"
#include "msmfe/parallel.hpp"
#include "msmfe/sparse.hpp"

namespace msmfe {

/// Coefficient vectors of a discrete solution. For the scaled variant `gamma` holds the
/// scaled rotation.
struct SolutionFields {
    Method method = Method::msmfe0;
    std::vector<double> sigma;
    std::vector<double> u;
    std::vector<double> gamma;
};

/// Cell-centered SPD system over [u; gamma] or over u alone.
struct ReducedSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    bool includes_rotation = true;
    std::size_t num_u = 0;
    std::size_t num_gamma = 0;
};

/// Local elimination of the stress (and, for MSMFE-1, of the rotation) vertex by vertex.
///
/// Each vertex block of A_ss is factored exactly once at construction; the factors are
/// reused for the Schur complements and for recovery.
class Reduction {
public:
    Reduction(const StructuredMesh& mesh, const AssembledSystem& sys)
        : mesh_(&mesh), sys_(&sys), bu_t_(sys.asu.transposed()), bg_t_(sys.asg.transposed())
    {
        const std::size_t nv = sys.dofs.num_vertices();
        factors_.resize(nv);
        std::atomic<std::size_t> count{0};
        parallel_for(0, nv, [&](std::size_t v) {
            if (!factors_[v].factor(sys.ass.blocks[v]))
                throw NotPositiveDefinite("stress block of vertex " + std::to_string(v) + " is not positive definite",
                                          static_cast<long>(v));
            count.fetch_add(1, std::memory_order_relaxed);
        });
        factorizations_ = count.load();
        local_rows_.resize(nv);
        for (std::size_t v = 0; v < nv; ++v) local_rows_[v] = gather_rows(v);
    }

    [[nodiscard]] std::size_t factorizations() const noexcept { return factorizations_; }
    [[nodiscard]] const PackedCholesky& factor(std::size_t v) const { return factors_[v]; }

    /// Schur complement B A_ss^{-1} B^T over [u; gamma] with rhs B A_ss^{-1} rhs_sigma - [f; 0].
    [[nodiscard]] ReducedSystem eliminate_stress() const { return build(true); }

    /// Displacement-only system for MSMFE-1: the 3x3 rotation blocks are also eliminated.
    [[nodiscard]] ReducedSystem eliminate_rotation() const
    {
        if (!vertex_rotations(sys_->method))
            throw InvalidArgument("rotation elimination requires vertex rotations (MSMFE-1)");
        return build(false);
    }

    /// Back-substitution: gamma (if eliminated) from its 3x3 systems, then stress per vertex.
    [[nodiscard]] SolutionFields recover(const ReducedSystem& reduced, const std::vector<double>& x) const
    {
        const std::size_t nu = sys_->dofs.num_u();
        const std::size_t ng = sys_->dofs.num_gamma();
        SolutionFields out;
        out.method = sys_->method;
        out.u.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nu));
        out.gamma.assign(ng, 0.0);
        if (reduced.includes_rotation) {
            std::copy(x.begin() + static_cast<std::ptrdiff_t>(nu), x.end(), out.gamma.begin());
        } else {
            parallel_for(0, sys_->dofs.num_vertices(), [&](std::size_t v) {
                const Local loc = local(v);
                const auto split = partition(loc.rows, nu);
                const auto& gi = split[1];
                if (gi.empty()) return;
                DenseMatrix sgg(gi.size(), gi.size());
                std::vector<double> rhs(gi.size());
                for (std::size_t a = 0; a < gi.size(); ++a) {
                    rhs[a] = loc.g[gi[a]];
                    for (std::size_t b = 0; b < gi.size(); ++b) sgg(a, b) = loc.s(gi[a], gi[b]);
                    for (std::size_t p : split[0]) rhs[a] -= loc.s(gi[a], p) * out.u[loc.rows[p]];
                }
                PackedCholesky ch;
                if (!ch.factor(sgg))
                    throw NotPositiveDefinite("rotation block of vertex " + std::to_string(v) + " is singular",
                                              static_cast<long>(v));
                ch.solve_in_place(rhs);
                for (std::size_t a = 0; a < gi.size(); ++a) out.gamma[loc.rows[gi[a]] - nu] = rhs[a];
            });
        }
        out.sigma.assign(sys_->dofs.num_sigma(), 0.0);
        parallel_for(0, sys_->dofs.num_vertices(), [&](std::size_t v) {
            const std::size_t base = sys_->dofs.block_begin(v);
            const std::size_t m = sys_->dofs.block_size(v);
            std::vector<double> r(sys_->rhs_sigma.begin() + static_cast<std::ptrdiff_t>(base),
                                  sys_->rhs_sigma.begin() + static_cast<std::ptrdiff_t>(base + m));
            for (std::size_t a = 0; a < m; ++a) {
                const std::size_t s = base + a;
                for (std::size_t p = bu_t_.row_ptr()[s]; p < bu_t_.row_ptr()[s + 1]; ++p)
                    r[a] -= bu_t_.values()[p] * out.u[bu_t_.col_index()[p]];
                for (std::size_t p = bg_t_.row_ptr()[s]; p < bg_t_.row_ptr()[s + 1]; ++p)
                    r[a] -= bg_t_.values()[p] * out.gamma[bg_t_.col_index()[p]];
            }
            factors_[v].solve_in_place(r);
            std::copy(r.begin(), r.end(), out.sigma.begin() + static_cast<std::ptrdiff_t>(base));
        });
        return out;
    }

private:
    struct Local {
        std::vector<std::size_t> rows;  ///< global [u; gamma] indices
        DenseMatrix s;                  ///< local Schur complement
        std::vector<double> g;          ///< local B A^{-1} rhs_sigma
    };

    [[nodiscard]] std::vector<std::size_t> gather_rows(std::size_t v) const
    {
        const std::size_t nu = sys_->dofs.num_u();
        const std::size_t base = sys_->dofs.block_begin(v);
        const std::size_t m = sys_->dofs.block_size(v);
        std::vector<std::size_t> rows;
        for (std::size_t s = base; s < base + m; ++s) {
            for (std::size_t p = bu_t_.row_ptr()[s]; p < bu_t_.row_ptr()[s + 1]; ++p) rows.push_back(bu_t_.col_index()[p]);
            for (std::size_t p = bg_t_.row_ptr()[s]; p < bg_t_.row_ptr()[s + 1]; ++p)
                rows.push_back(nu + bg_t_.col_index()[p]);
        }
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        return rows;
    }

    [[nodiscard]] Local local(std::size_t v) const
    {
        const std::size_t nu = sys_->dofs.num_u();
        const std::size_t base = sys_->dofs.block_begin(v);
        const std::size_t m = sys_->dofs.block_size(v);
        Local loc;
        loc.rows = local_rows_[v];
        const std::size_t l = loc.rows.size();
        DenseMatrix b(l, m);
        auto pos = [&](std::size_t global) {
            return static_cast<std::size_t>(std::lower_bound(loc.rows.begin(), loc.rows.end(), global) - loc.rows.begin());
        };
        for (std::size_t a = 0; a < m; ++a) {
            const std::size_t s = base + a;
            for (std::size_t p = bu_t_.row_ptr()[s]; p < bu_t_.row_ptr()[s + 1]; ++p)
                b(pos(bu_t_.col_index()[p]), a) += bu_t_.values()[p];
            for (std::size_t p = bg_t_.row_ptr()[s]; p < bg_t_.row_ptr()[s + 1]; ++p)
                b(pos(nu + bg_t_.col_index()[p]), a) += bg_t_.values()[p];
        }
        DenseMatrix y(l, m);  // rows of (A^{-1} B^T)^T
        for (std::size_t i = 0; i < l; ++i) {
            std::copy(b.row(i).begin(), b.row(i).end(), y.row(i).begin());
            factors_[v].solve_in_place(y.row(i));
        }
        loc.s = DenseMatrix(l, l);
        loc.g.assign(l, 0.0);
        for (std::size_t i = 0; i < l; ++i) {
            const auto yi = y.row(i);
            for (std::size_t j = 0; j <= i; ++j) {
                const auto bj = b.row(j);
                double t = 0.0;
                for (std::size_t a = 0; a < m; ++a) t += bj[a] * yi[a];
                loc.s(i, j) = t;
                loc.s(j, i) = t;
            }
            double t = 0.0;
            for (std::size_t a = 0; a < m; ++a) t += yi[a] * sys_->rhs_sigma[base + a];
            loc.g[i] = t;
        }
        return loc;
    }

    /// Splits local positions into displacement and rotation parts.
    static std::array<std::vector<std::size_t>, 2> partition(const std::vector<std::size_t>& rows, std::size_t nu)
    {
        std::array<std::vector<std::size_t>, 2> p;
        for (std::size_t i = 0; i < rows.size(); ++i) p[rows[i] < nu ? 0 : 1].push_back(i);
        return p;
    }

    [[nodiscard]] ReducedSystem build(bool keep_rotation) const
    {
        const std::size_t nu = sys_->dofs.num_u();
        const std::size_t ng = sys_->dofs.num_gamma();
        const std::size_t n = keep_rotation ? nu + ng : nu;
        const std::size_t nv = sys_->dofs.num_vertices();

        // unknown -> vertices whose local rows contain it, then row pattern = union of those rows
        std::vector<std::vector<std::size_t>> owners(n);
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t r : local_rows_[v])
                if (r < n) owners[r].push_back(v);
        std::vector<std::vector<std::size_t>> pattern(n);
        parallel_for(0, n, [&](std::size_t r) {
            auto& cols = pattern[r];
            for (std::size_t v : owners[r])
                for (std::size_t c : local_rows_[v])
                    if (c < n) cols.push_back(c);
            std::sort(cols.begin(), cols.end());
            cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        });
        owners.clear();

        ReducedSystem red;
        red.includes_rotation = keep_rotation;
        red.num_u = nu;
        red.num_gamma = keep_rotation ? ng : 0;
        red.matrix = CsrMatrix::from_pattern(n, n, pattern);
        pattern.clear();
        red.rhs.assign(n, 0.0);

        // Vertices of equal index parity share no cell, hence touch disjoint rows.
        std::array<std::vector<std::size_t>, 8> colors;
        for (std::size_t v = 0; v < nv; ++v) {
            const auto ijk = mesh_->vertex_ijk(v);
            colors[(ijk[0] % 2) + 2 * (ijk[1] % 2) + 4 * (ijk[2] % 2)].push_back(v);
        }
        for (const auto& color : colors) {
            parallel_for(0, color.size(), [&](std::size_t ci) {
                const std::size_t v = color[ci];
                Local loc = local(v);
                if (!keep_rotation) condense_rotation(v, loc, nu);
                for (std::size_t i = 0; i < loc.rows.size(); ++i) {
                    const std::size_t gi = loc.rows[i];
                    if (gi >= n) continue;
                    red.rhs[gi] += loc.g[i];
                    for (std::size_t j = 0; j < loc.rows.size(); ++j) {
                        if (loc.rows[j] >= n) continue;
                        red.matrix.add(gi, loc.rows[j], loc.s(i, j));
                    }
                }
            });
        }
        for (std::size_t i = 0; i < nu; ++i) red.rhs[i] -= sys_->rhs_u[i];
        return red;
    }

    /// Replaces the displacement part of a local Schur complement by its Schur complement
    /// with respect to the vertex's own rotation block.
    void condense_rotation(std::size_t v, Local& loc, std::size_t nu) const
    {
        const auto split = partition(loc.rows, nu);
        const auto& gi = split[1];
        if (gi.empty()) return;
        if (gi.size() != 3)
            throw SolverError("vertex " + std::to_string(v) + " couples to " + std::to_string(gi.size()) +
                              " rotation unknowns, expected 3");
        DenseMatrix sgg(3, 3);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) sgg(a, b) = loc.s(gi[a], gi[b]);
        PackedCholesky ch;
        if (!ch.factor(sgg))
            throw NotPositiveDefinite("rotation block of vertex " + std::to_string(v) + " is singular",
                                      static_cast<long>(v));
        const std::size_t l = loc.rows.size();
        // z_i = S_gg^{-1} S_g,i for every local position i
        DenseMatrix z(l, 3);
        for (std::size_t i = 0; i < l; ++i) {
            std::array<double, 3> col{loc.s(gi[0], i), loc.s(gi[1], i), loc.s(gi[2], i)};
            ch.solve_in_place(col);
            for (std::size_t a = 0; a < 3; ++a) z(i, a) = col[a];
        }
        std::array<double, 3> gg{loc.g[gi[0]], loc.g[gi[1]], loc.g[gi[2]]};
        ch.solve_in_place(gg);
        for (std::size_t i : split[0]) {
            for (std::size_t j : split[0]) {
                double t = 0.0;
                for (std::size_t a = 0; a < 3; ++a) t += loc.s(i, gi[a]) * z(j, a);
                loc.s(i, j) -= t;
            }
            for (std::size_t a = 0; a < 3; ++a) loc.g[i] -= loc.s(i, gi[a]) * gg[a];
        }
    }

    const StructuredMesh* mesh_;
    const AssembledSystem* sys_;
    CsrMatrix bu_t_;
    CsrMatrix bg_t_;
    std::vector<PackedCholesky> factors_;
    std::vector<std::vector<std::size_t>> local_rows_;
    std::size_t factorizations_ = 0;
};

/// Largest number of distinct cells coupled to one row of a reduced system. Rotation
/// unknowns of MSMFE-0 are attributed to their cell.
inline std::size_t max_stencil_cells(const ReducedSystem& rs)
{
    std::size_t worst = 0;
    const auto& m = rs.matrix;
    std::vector<std::size_t> cells;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        cells.clear();
        for (std::size_t p = m.row_ptr()[r]; p < m.row_ptr()[r + 1]; ++p) {
            const std::size_t col = m.col_index()[p];
            cells.push_back(col < rs.num_u ? col / 3 : (col - rs.num_u) / 3);
        }
        std::sort(cells.begin(), cells.end());
        worst = std::max(worst, static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin()));
    }
    return worst;
}

}  // namespace msmfe

#endif  // MSMFE_REDUCTION_HPP
