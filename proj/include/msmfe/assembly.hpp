#ifndef MSMFE_ASSEMBLY_HPP
#define MSMFE_ASSEMBLY_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "msmfe/dense.hpp"
#include "msmfe/errors.hpp"
#include "msmfe/material.hpp"
#include "msmfe/mesh.hpp"
#include "msmfe/parallel.hpp"
#include "msmfe/quadrature.hpp"
#include "msmfe/ref_elements.hpp"
#include "msmfe/sparse.hpp"
#include "msmfe/tensor.hpp"

namespace msmfe {

enum class Method { msmfe0, msmfe1, msmfe1_scaled };

inline std::string method_name(Method m)
{
    switch (m) {
        case Method::msmfe0: return "msmfe0";
        case Method::msmfe1: return "msmfe1";
        case Method::msmfe1_scaled: return "msmfe1-scaled";
    }
    return "?";
}

inline Method parse_method(const std::string& s)
{
    if (s == "msmfe0") return Method::msmfe0;
    if (s == "msmfe1") return Method::msmfe1;
    if (s == "msmfe1-scaled") return Method::msmfe1_scaled;
    throw InvalidArgument("unknown method '" + s + "' (expected msmfe0, msmfe1 or msmfe1-scaled)");
}

/// Rotations live on vertices for both MSMFE-1 variants and on cells for MSMFE-0.
inline bool vertex_rotations(Method m) { return m != Method::msmfe0; }

using VectorField = std::function<Vec3(const Vec3&)>;

/// Quadrature used for the MSMFE-0 stress-rotation form (tau, w) with cellwise constant w.
enum class RotationForm {
    vertex,  ///< vertex rule, equal to pairing w with the lowest-order projection of tau
    exact    ///< exact cell integral
};

/// Quadrature for the Dirichlet boundary term <g, tau n>.
enum class DirichletRule {
    face_midpoint,  ///< one-point rule; consistent with the vertex rule, passes the linear patch test
    gauss3          ///< 3x3 face Gauss
};

/// Quadrature for the load term (f, v).
enum class LoadRule {
    vertex,  ///< cell vertex rule
    gauss3   ///< 3x3x3 Gauss
};

struct AssemblyOptions {
    RotationForm rotation_form = RotationForm::vertex;
    DirichletRule dirichlet_rule = DirichletRule::face_midpoint;
    LoadRule load_rule = LoadRule::vertex;

    bool operator==(const AssemblyOptions&) const = default;
};

inline RotationForm parse_rotation_form(const std::string& s)
{
    if (s == "vertex") return RotationForm::vertex;
    if (s == "exact") return RotationForm::exact;
    throw InvalidArgument("unknown rotation form '" + s + "' (expected vertex or exact)");
}

inline DirichletRule parse_dirichlet_rule(const std::string& s)
{
    if (s == "midpoint") return DirichletRule::face_midpoint;
    if (s == "gauss3") return DirichletRule::gauss3;
    throw InvalidArgument("unknown boundary rule '" + s + "' (expected midpoint or gauss3)");
}

inline LoadRule parse_load_rule(const std::string& s)
{
    if (s == "vertex") return LoadRule::vertex;
    if (s == "gauss3") return LoadRule::gauss3;
    throw InvalidArgument("unknown load rule '" + s + "' (expected vertex or gauss3)");
}

inline std::string rotation_form_name(RotationForm r) { return r == RotationForm::vertex ? "vertex" : "exact"; }
inline std::string dirichlet_rule_name(DirichletRule r) { return r == DirichletRule::face_midpoint ? "midpoint" : "gauss3"; }
inline std::string load_rule_name(LoadRule r) { return r == LoadRule::vertex ? "vertex" : "gauss3"; }

/// Global numbering of the unknowns.
///
/// Stress d.o.f. (face, corner, row) are grouped contiguously by the vertex at the corner;
/// within a vertex group the order is (incident face, row). Faces tagged Neumann carry no
/// d.o.f. (homogeneous essential condition).
class DofMap {
public:
    DofMap() = default;
    DofMap(const StructuredMesh& mesh, Method method) : method_(method)
    {
        const std::size_t nv = mesh.num_vertices();
        vertex_offset_.assign(nv + 1, 0);
        face_corner_base_.assign(mesh.num_faces() * 4, npos);
        vertex_faces_.resize(nv);
        for (std::size_t v = 0; v < nv; ++v) {
            std::size_t off = vertex_offset_[v];
            for (std::size_t f : mesh.vertex_faces(v)) {
                if (mesh.is_boundary_face(f) && mesh.tags().is_neumann(f)) continue;
                vertex_faces_[v].push_back(f);
                face_corner_base_[4 * f + static_cast<std::size_t>(mesh.face_corner_of(f, v))] = off;
                off += 3;
            }
            vertex_offset_[v + 1] = off;
        }
        num_u_ = 3 * mesh.num_cells();
        num_gamma_ = 3 * (vertex_rotations(method) ? nv : mesh.num_cells());
    }

    [[nodiscard]] Method method() const noexcept { return method_; }
    [[nodiscard]] std::size_t num_sigma() const noexcept { return vertex_offset_.back(); }
    [[nodiscard]] std::size_t num_u() const noexcept { return num_u_; }
    [[nodiscard]] std::size_t num_gamma() const noexcept { return num_gamma_; }
    [[nodiscard]] std::size_t num_vertices() const noexcept { return vertex_faces_.size(); }

    /// Stress index of (face, corner, row), npos if constrained.
    [[nodiscard]] std::size_t sigma(std::size_t face, int corner, int row) const
    {
        const std::size_t b = face_corner_base_[4 * face + static_cast<std::size_t>(corner)];
        return b == npos ? npos : b + static_cast<std::size_t>(row);
    }

    [[nodiscard]] std::size_t u(std::size_t cell, int comp) const { return 3 * cell + static_cast<std::size_t>(comp); }
    /// Rotation index: entity is a cell (MSMFE-0) or a vertex (MSMFE-1).
    [[nodiscard]] std::size_t gamma(std::size_t entity, int axis) const { return 3 * entity + static_cast<std::size_t>(axis); }

    [[nodiscard]] std::size_t block_begin(std::size_t v) const { return vertex_offset_[v]; }
    [[nodiscard]] std::size_t block_size(std::size_t v) const { return vertex_offset_[v + 1] - vertex_offset_[v]; }
    [[nodiscard]] const std::vector<std::size_t>& block_faces(std::size_t v) const { return vertex_faces_[v]; }

    /// Vertex group owning stress d.o.f. s.
    [[nodiscard]] std::size_t vertex_of(std::size_t s) const
    {
        const auto it = std::upper_bound(vertex_offset_.begin(), vertex_offset_.end(), s);
        return static_cast<std::size_t>(it - vertex_offset_.begin()) - 1;
    }

private:
    Method method_ = Method::msmfe0;
    std::vector<std::size_t> vertex_offset_{0};
    std::vector<std::size_t> face_corner_base_;
    std::vector<std::vector<std::size_t>> vertex_faces_;
    std::size_t num_u_ = 0;
    std::size_t num_gamma_ = 0;
};

/// Block-diagonal matrix partitioned by mesh vertices; block v acts on the contiguous
/// stress range [dofs.block_begin(v), dofs.block_begin(v) + dofs.block_size(v)).
struct VertexBlockMatrix {
    std::vector<DenseMatrix> blocks;
};

/// Reference-element tables shared by all cells.
struct ReferenceTables {
    std::array<std::array<Vec3, 24>, 8> at_vertex{};  ///< basis k at reference vertex i
    std::array<double, 24> divergence{};
    std::array<Vec3, 24> integral{};                   ///< 2x2x2 Gauss integral of basis k
    std::array<Vec3, 24> vertex_integral{};            ///< vertex-rule integral of basis k

    ReferenceTables()
    {
        const auto& b = ert0_basis();
        for (int i = 0; i < 8; ++i)
            for (int k = 0; k < 24; ++k)
                at_vertex[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = b.eval(k, reference::vertex_point(i));
        const auto q = gauss_cube(2);
        for (int k = 0; k < 24; ++k) {
            divergence[static_cast<std::size_t>(k)] = b.div(k);
            Vec3 s{};
            for (const auto& p : q) s = s + p.w * b.eval(k, p.x);
            integral[static_cast<std::size_t>(k)] = s;
            Vec3 sv{};
            for (int i = 0; i < 8; ++i) sv = sv + 0.125 * at_vertex[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            vertex_integral[static_cast<std::size_t>(k)] = sv;
        }
    }
};

inline const ReferenceTables& reference_tables()
{
    static const ReferenceTables t;
    return t;
}

/// Physical value (a matrix with only row `row` nonzero) of the stress basis for local
/// basis k, oriented by its global face normal, given the reference vector value.
inline Mat3 piola_row(const CellMap& map, int k, int row, const Vec3& ref_value)
{
    const double sign = reference::outward_sign(k / 4);
    Mat3 m{};
    for (std::size_t c = 0; c < 3; ++c)
        m[static_cast<std::size_t>(row)][c] = sign * map.h[c] * ref_value[c] / map.jacobian;
    return m;
}

struct AssembledSystem {
    Method method = Method::msmfe0;
    DofMap dofs;
    VertexBlockMatrix ass;
    CsrMatrix asu;   ///< n_u x n_sigma
    CsrMatrix asg;   ///< n_gamma x n_sigma
    std::vector<double> rhs_sigma;
    std::vector<double> rhs_u;  ///< cell integrals of f
};

/// Stress-stress form with the vertex quadrature rule, one block per vertex.
inline VertexBlockMatrix assemble_Ass(const StructuredMesh& mesh, const DofMap& dofs, const ComplianceField& material)
{
    const auto& tab = reference_tables();
    VertexBlockMatrix out;
    out.blocks.resize(mesh.num_vertices());
    parallel_for(0, mesh.num_vertices(), [&](std::size_t v) {
        const std::size_t m = dofs.block_size(v);
        const std::size_t base = dofs.block_begin(v);
        DenseMatrix block(m, m);
        for (std::size_t c : mesh.vertex_cells(v)) {
            const CellMap map = mesh.cell_map(c);
            const auto cv = mesh.cell_vertices(c);
            const auto cf = mesh.cell_faces(c);
            int i = 0;
            while (cv[static_cast<std::size_t>(i)] != v) ++i;
            const Vec3 corner = map.to_physical(reference::vertex_point(i));
            const Vec3 centroid = map.to_physical({0.5, 0.5, 0.5});
            const Lame lame = material.at_corner(corner, centroid);
            const auto slots = reference::vertex_slots(i);
            // local (slot, row) -> block row and physical value
            std::array<std::size_t, 9> idx{};
            std::array<Mat3, 9> val{};
            std::array<Mat3, 9> aval{};
            int count = 0;
            for (const auto& s : slots) {
                const std::size_t f = cf[static_cast<std::size_t>(s.face)];
                const int k = Ert0Basis::index(s.face, s.corner);
                for (int r = 0; r < 3; ++r) {
                    const std::size_t g = dofs.sigma(f, s.corner, r);
                    if (g == npos) continue;
                    idx[static_cast<std::size_t>(count)] = g - base;
                    val[static_cast<std::size_t>(count)] =
                        piola_row(map, k, r, tab.at_vertex[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
                    aval[static_cast<std::size_t>(count)] = apply_compliance(lame, val[static_cast<std::size_t>(count)]);
                    ++count;
                }
            }
            const double w = map.jacobian / 8.0;
            for (int a = 0; a < count; ++a)
                for (int b = 0; b < count; ++b)
                    block(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]) +=
                        w * contract(aval[static_cast<std::size_t>(b)], val[static_cast<std::size_t>(a)]);
        }
        out.blocks[v] = std::move(block);
    });
    return out;
}

/// Divergence coupling (div tau_j, v_i), exact.
inline CsrMatrix assemble_Asu(const StructuredMesh& mesh, const DofMap& dofs)
{
    const auto& tab = reference_tables();
    return CsrMatrix::from_rows(dofs.num_u(), dofs.num_sigma(), [&](std::size_t row, auto& entries) {
        const std::size_t c = row / 3;
        const int r = static_cast<int>(row % 3);
        const auto cf = mesh.cell_faces(c);
        for (int k = 0; k < 24; ++k) {
            const std::size_t g = dofs.sigma(cf[static_cast<std::size_t>(k / 4)], k % 4, r);
            if (g == npos) continue;
            entries.emplace_back(g, reference::outward_sign(k / 4) * tab.divergence[static_cast<std::size_t>(k)]);
        }
    });
}

/// Stress-rotation coupling: (tau, w) for MSMFE-0 with the configured rule, (tau, w)_Q for
/// MSMFE-1 and (A tau, w)_Q for the scaled variant.
inline CsrMatrix assemble_Asg(const StructuredMesh& mesh, const DofMap& dofs, const ComplianceField& material,
                              RotationForm form = RotationForm::vertex)
{
    const auto& tab = reference_tables();
    const Method method = dofs.method();
    if (method == Method::msmfe0) {
        const auto& integral = form == RotationForm::exact ? tab.integral : tab.vertex_integral;
        return CsrMatrix::from_rows(dofs.num_gamma(), dofs.num_sigma(), [&](std::size_t row, auto& entries) {
            const std::size_t c = row / 3;
            const Mat3 w = xi(unit_vector(static_cast<int>(row % 3)));
            const CellMap map = mesh.cell_map(c);
            const auto cf = mesh.cell_faces(c);
            for (int k = 0; k < 24; ++k)
                for (int r = 0; r < 3; ++r) {
                    const std::size_t g = dofs.sigma(cf[static_cast<std::size_t>(k / 4)], k % 4, r);
                    if (g == npos) continue;
                    // J * (piola value of the integral) : w
                    const double e = map.jacobian * contract(piola_row(map, k, r, integral[static_cast<std::size_t>(k)]), w);
                    if (e != 0.0) entries.emplace_back(g, e);
                }
        });
    }
    const bool scaled = method == Method::msmfe1_scaled;
    return CsrMatrix::from_rows(dofs.num_gamma(), dofs.num_sigma(), [&](std::size_t row, auto& entries) {
        const std::size_t v = row / 3;
        const Mat3 w = xi(unit_vector(static_cast<int>(row % 3)));
        for (std::size_t c : mesh.vertex_cells(v)) {
            const CellMap map = mesh.cell_map(c);
            const auto cv = mesh.cell_vertices(c);
            const auto cf = mesh.cell_faces(c);
            int i = 0;
            while (cv[static_cast<std::size_t>(i)] != v) ++i;
            Lame lame;
            if (scaled)
                lame = material.at_corner(map.to_physical(reference::vertex_point(i)), map.to_physical({0.5, 0.5, 0.5}));
            for (const auto& s : reference::vertex_slots(i)) {
                const int k = Ert0Basis::index(s.face, s.corner);
                for (int r = 0; r < 3; ++r) {
                    const std::size_t g = dofs.sigma(cf[static_cast<std::size_t>(s.face)], s.corner, r);
                    if (g == npos) continue;
                    Mat3 t = piola_row(map, k, r, tab.at_vertex[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
                    if (scaled) t = apply_compliance(lame, t);
                    const double e = map.jacobian / 8.0 * contract(t, w);
                    if (e != 0.0) entries.emplace_back(g, e);
                }
            }
        }
    });
}

struct RightHandSides {
    std::vector<double> sigma;
    std::vector<double> u;
};

/// rhs_sigma = <g, tau n> over Dirichlet faces; rhs_u = cell integrals of f.
inline RightHandSides assemble_rhs(const StructuredMesh& mesh, const DofMap& dofs, const VectorField& f,
                                   const VectorField& g, const AssemblyOptions& opt = {})
{
    RightHandSides rhs;
    rhs.sigma.assign(dofs.num_sigma(), 0.0);
    rhs.u.assign(dofs.num_u(), 0.0);
    std::vector<QuadPoint> cube;
    if (opt.load_rule == LoadRule::gauss3) {
        cube = gauss_cube(3);
    } else {
        for (int i = 0; i < 8; ++i) cube.push_back({reference::vertex_point(i), 0.125});
    }
    parallel_for(0, mesh.num_cells(), [&](std::size_t c) {
        const CellMap map = mesh.cell_map(c);
        Vec3 s{};
        for (const auto& q : cube) s = s + q.w * f(map.to_physical(q.x));
        for (int r = 0; r < 3; ++r) rhs.u[dofs.u(c, r)] = map.jacobian * s[static_cast<std::size_t>(r)];
    });
    if (!g) return rhs;
    // (s, t, weight) on the unit square; the Piola normal flux cancels the face area
    std::vector<std::array<double, 3>> square;
    if (opt.dirichlet_rule == DirichletRule::gauss3)
        square = gauss_square(3);
    else
        square.push_back({0.5, 0.5, 1.0});
    for (std::size_t face = 0; face < mesh.num_faces(); ++face) {
        const int side = mesh.boundary_side(face);
        if (side < 0 || mesh.tags().is_neumann(face)) continue;
        const auto fc = mesh.face_cells(face);
        const std::size_t c = fc[0] != npos ? fc[0] : fc[1];
        const int lf = side;  // local face of the owning cell coincides with the domain side
        const CellMap map = mesh.cell_map(c);
        const double sign = reference::outward_sign(lf);
        for (int lc = 0; lc < 4; ++lc) {
            Vec3 s{};
            for (const auto& q : square) {
                const Vec3 x = map.to_physical(reference::face_point(lf, q[0], q[1]));
                s = s + (q[2] * reference::face_hat(lc, q[0], q[1])) * g(x);
            }
            for (int r = 0; r < 3; ++r) {
                const std::size_t idx = dofs.sigma(face, lc, r);
                if (idx != npos) rhs.sigma[idx] += sign * s[static_cast<std::size_t>(r)];
            }
        }
    }
    return rhs;
}

inline AssembledSystem assemble_system(const StructuredMesh& mesh, Method method, const ComplianceField& material,
                                       const VectorField& f, const VectorField& g, const AssemblyOptions& opt = {})
{
    AssembledSystem sys{method, DofMap(mesh, method), {}, {}, {}, {}, {}};
    sys.ass = assemble_Ass(mesh, sys.dofs, material);
    sys.asu = assemble_Asu(mesh, sys.dofs);
    sys.asg = assemble_Asg(mesh, sys.dofs, material, opt.rotation_form);
    auto rhs = assemble_rhs(mesh, sys.dofs, f, g, opt);
    sys.rhs_sigma = std::move(rhs.sigma);
    sys.rhs_u = std::move(rhs.u);
    return sys;
}

}  // namespace msmfe

#endif  // MSMFE_ASSEMBLY_HPP
