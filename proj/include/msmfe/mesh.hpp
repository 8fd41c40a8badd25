#ifndef MSMFE_MESH_HPP
#define MSMFE_MESH_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "msmfe/errors.hpp"
#include "msmfe/ref_elements.hpp"
#include "msmfe/tensor.hpp"

namespace msmfe {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct DomainBox {
    Vec3 lo{0.0, 0.0, 0.0};
    Vec3 hi{1.0, 1.0, 1.0};

    void validate() const
    {
        for (std::size_t k = 0; k < 3; ++k)
            if (!(hi[k] > lo[k])) throw InvalidArgument("degenerate domain box along axis " + std::to_string(k));
    }
};

/// Affine map of an axis-aligned cell: x = origin + diag(h) x_hat.
struct CellMap {
    Vec3 origin{};
    Vec3 h{};
    double jacobian = 0.0;

    [[nodiscard]] Vec3 to_physical(const Vec3& xhat) const
    {
        return {origin[0] + h[0] * xhat[0], origin[1] + h[1] * xhat[1], origin[2] + h[2] * xhat[2]};
    }
    [[nodiscard]] Vec3 to_reference(const Vec3& x) const
    {
        return {(x[0] - origin[0]) / h[0], (x[1] - origin[1]) / h[1], (x[2] - origin[2]) / h[2]};
    }
};

enum class BoundaryTag { dirichlet, neumann };

/// Decides the tag of a boundary face from its domain side (0..5, ordered -x,+x,-y,+y,-z,+z)
/// and its centroid.
using BoundaryRule = std::function<BoundaryTag(int side, const Vec3& centroid)>;

inline BoundaryRule all_dirichlet()
{
    return [](int, const Vec3&) { return BoundaryTag::dirichlet; };
}

/// Per-face boundary tag; entries for interior faces are unused.
struct BoundaryTags {
    std::vector<BoundaryTag> tag;
    [[nodiscard]] bool is_neumann(std::size_t face) const { return tag[face] == BoundaryTag::neumann; }
};

struct VertexStar {
    std::vector<std::size_t> cells;
    std::vector<std::size_t> faces;
    std::vector<std::array<std::size_t, 4>> face_corners;  ///< vertex ids of each face's corners
};

/// Structured grid with x-fastest numbering of cells, vertices and faces. Faces come in
/// three families by normal axis (x, then y, then z); the global normal of a face is +axis.
class StructuredMesh {
public:
    StructuredMesh(const DomainBox& box, std::array<int, 3> n, const BoundaryRule& rule = all_dirichlet())
        : box_(box), n_(n)
    {
        box.validate();
        for (std::size_t k = 0; k < 3; ++k) {
            if (n[k] < 1) throw InvalidArgument("cells per axis must be positive, got " + std::to_string(n[k]));
            nn_[k] = static_cast<std::size_t>(n[k]);
            h_[k] = (box.hi[k] - box.lo[k]) / n[k];
        }
        num_cells_ = nn_[0] * nn_[1] * nn_[2];
        num_vertices_ = (nn_[0] + 1) * (nn_[1] + 1) * (nn_[2] + 1);
        std::size_t off = 0;
        for (std::size_t a = 0; a < 3; ++a) {
            face_offset_[a] = off;
            for (std::size_t b = 0; b < 3; ++b) face_dims_[a][b] = b == a ? nn_[b] + 1 : nn_[b];
            off += face_dims_[a][0] * face_dims_[a][1] * face_dims_[a][2];
        }
        face_offset_[3] = off;
        num_faces_ = off;

        tags_.tag.assign(num_faces_, BoundaryTag::dirichlet);
        bool any_dirichlet = false;
        for (std::size_t f = 0; f < num_faces_; ++f) {
            const int side = boundary_side(f);
            if (side < 0) continue;
            tags_.tag[f] = rule(side, face_centroid(f));
            any_dirichlet = any_dirichlet || tags_.tag[f] == BoundaryTag::dirichlet;
        }
        if (!any_dirichlet) throw InvalidArgument("boundary tagging leaves no Dirichlet face");
    }

    [[nodiscard]] const DomainBox& box() const noexcept { return box_; }
    [[nodiscard]] std::array<int, 3> n() const noexcept { return n_; }
    [[nodiscard]] const Vec3& h() const noexcept { return h_; }
    [[nodiscard]] std::size_t num_cells() const noexcept { return num_cells_; }
    [[nodiscard]] std::size_t num_vertices() const noexcept { return num_vertices_; }
    [[nodiscard]] std::size_t num_faces() const noexcept { return num_faces_; }
    [[nodiscard]] const BoundaryTags& tags() const noexcept { return tags_; }

    [[nodiscard]] std::size_t cell_index(std::size_t i, std::size_t j, std::size_t k) const
    {
        return i + nn_[0] * (j + nn_[1] * k);
    }
    [[nodiscard]] std::array<std::size_t, 3> cell_ijk(std::size_t c) const
    {
        return {c % nn_[0], (c / nn_[0]) % nn_[1], c / (nn_[0] * nn_[1])};
    }
    [[nodiscard]] std::size_t vertex_index(std::size_t i, std::size_t j, std::size_t k) const
    {
        return i + (nn_[0] + 1) * (j + (nn_[1] + 1) * k);
    }
    [[nodiscard]] std::array<std::size_t, 3> vertex_ijk(std::size_t v) const
    {
        return {v % (nn_[0] + 1), (v / (nn_[0] + 1)) % (nn_[1] + 1), v / ((nn_[0] + 1) * (nn_[1] + 1))};
    }
    [[nodiscard]] std::size_t face_index(int axis, std::size_t i, std::size_t j, std::size_t k) const
    {
        const auto& d = face_dims_[static_cast<std::size_t>(axis)];
        return face_offset_[static_cast<std::size_t>(axis)] + i + d[0] * (j + d[1] * k);
    }
    [[nodiscard]] int face_axis(std::size_t f) const
    {
        return f < face_offset_[1] ? 0 : (f < face_offset_[2] ? 1 : 2);
    }
    [[nodiscard]] std::array<std::size_t, 3> face_ijk(std::size_t f) const
    {
        const auto a = static_cast<std::size_t>(face_axis(f));
        const std::size_t r = f - face_offset_[a];
        const auto& d = face_dims_[a];
        return {r % d[0], (r / d[0]) % d[1], r / (d[0] * d[1])};
    }

    [[nodiscard]] Vec3 vertex_point(std::size_t v) const
    {
        const auto ijk = vertex_ijk(v);
        Vec3 x{};
        for (std::size_t a = 0; a < 3; ++a) x[a] = ijk[a] == nn_[a] ? box_.hi[a] : box_.lo[a] + ijk[a] * h_[a];
        return x;
    }

    [[nodiscard]] CellMap cell_map(std::size_t c) const
    {
        const auto ijk = cell_ijk(c);
        CellMap m;
        for (std::size_t a = 0; a < 3; ++a) m.origin[a] = box_.lo[a] + ijk[a] * h_[a];
        m.h = h_;
        m.jacobian = h_[0] * h_[1] * h_[2];
        return m;
    }

    [[nodiscard]] Vec3 reference_to_physical(std::size_t c, const Vec3& xhat) const
    {
        return cell_map(c).to_physical(xhat);
    }

    /// Cell vertices in reference order r1..r8.
    [[nodiscard]] std::array<std::size_t, 8> cell_vertices(std::size_t c) const
    {
        const auto ijk = cell_ijk(c);
        std::array<std::size_t, 8> v{};
        for (int r = 0; r < 8; ++r) {
            const auto& o = reference::vertices[static_cast<std::size_t>(r)];
            v[static_cast<std::size_t>(r)] = vertex_index(ijk[0] + o[0], ijk[1] + o[1], ijk[2] + o[2]);
        }
        return v;
    }

    /// Cell faces in local order -x, +x, -y, +y, -z, +z.
    [[nodiscard]] std::array<std::size_t, 6> cell_faces(std::size_t c) const
    {
        const auto ijk = cell_ijk(c);
        std::array<std::size_t, 6> f{};
        for (int lf = 0; lf < 6; ++lf) {
            auto p = ijk;
            const auto a = static_cast<std::size_t>(reference::face_axis(lf));
            p[a] += static_cast<std::size_t>(reference::face_side(lf));
            f[static_cast<std::size_t>(lf)] = face_index(static_cast<int>(a), p[0], p[1], p[2]);
        }
        return f;
    }

    /// Face corners in face-corner order (lexicographic in the tangential axes).
    [[nodiscard]] std::array<std::size_t, 4> face_vertices(std::size_t f) const
    {
        const int a = face_axis(f);
        const auto ijk = face_ijk(f);
        const auto t = reference::tangential_axes(a);
        std::array<std::size_t, 4> v{};
        for (int lc = 0; lc < 4; ++lc) {
            auto p = ijk;
            p[static_cast<std::size_t>(t[0])] += static_cast<std::size_t>(lc % 2);
            p[static_cast<std::size_t>(t[1])] += static_cast<std::size_t>(lc / 2);
            v[static_cast<std::size_t>(lc)] = vertex_index(p[0], p[1], p[2]);
        }
        return v;
    }

    /// Cells on the low and high side of face f (npos if outside the domain).
    [[nodiscard]] std::array<std::size_t, 2> face_cells(std::size_t f) const
    {
        const auto a = static_cast<std::size_t>(face_axis(f));
        const auto ijk = face_ijk(f);
        std::array<std::size_t, 2> c{npos, npos};
        if (ijk[a] > 0) {
            auto p = ijk;
            p[a] -= 1;
            c[0] = cell_index(p[0], p[1], p[2]);
        }
        if (ijk[a] < nn_[a]) c[1] = cell_index(ijk[0], ijk[1], ijk[2]);
        return c;
    }

    /// Domain side (0..5) of a boundary face, -1 for interior faces.
    [[nodiscard]] int boundary_side(std::size_t f) const
    {
        const int a = face_axis(f);
        const auto ijk = face_ijk(f);
        if (ijk[static_cast<std::size_t>(a)] == 0) return 2 * a;
        if (ijk[static_cast<std::size_t>(a)] == nn_[static_cast<std::size_t>(a)]) return 2 * a + 1;
        return -1;
    }

    [[nodiscard]] bool is_boundary_face(std::size_t f) const { return boundary_side(f) >= 0; }

    [[nodiscard]] Vec3 face_centroid(std::size_t f) const
    {
        const auto a = static_cast<std::size_t>(face_axis(f));
        const auto ijk = face_ijk(f);
        Vec3 x{};
        for (std::size_t b = 0; b < 3; ++b) x[b] = box_.lo[b] + (ijk[b] + (b == a ? 0.0 : 0.5)) * h_[b];
        return x;
    }

    /// Corner index of vertex v within face f, or -1.
    [[nodiscard]] int face_corner_of(std::size_t f, std::size_t v) const
    {
        const auto fv = face_vertices(f);
        for (int lc = 0; lc < 4; ++lc)
            if (fv[static_cast<std::size_t>(lc)] == v) return lc;
        return -1;
    }

    /// Cells containing vertex v, x-fastest.
    [[nodiscard]] std::vector<std::size_t> vertex_cells(std::size_t v) const
    {
        const auto ijk = vertex_ijk(v);
        std::vector<std::size_t> cells;
        cells.reserve(8);
        for (std::size_t dk = 0; dk < 2; ++dk)
            for (std::size_t dj = 0; dj < 2; ++dj)
                for (std::size_t di = 0; di < 2; ++di) {
                    if (ijk[0] + di < 1 || ijk[1] + dj < 1 || ijk[2] + dk < 1) continue;
                    const std::size_t i = ijk[0] + di - 1, j = ijk[1] + dj - 1, k = ijk[2] + dk - 1;
                    if (i >= nn_[0] || j >= nn_[1] || k >= nn_[2]) continue;
                    cells.push_back(cell_index(i, j, k));
                }
        return cells;
    }

    /// Faces having v as a corner, ordered by family and then x-fastest.
    [[nodiscard]] std::vector<std::size_t> vertex_faces(std::size_t v) const
    {
        const auto ijk = vertex_ijk(v);
        std::vector<std::size_t> faces;
        faces.reserve(12);
        for (int a = 0; a < 3; ++a) {
            const auto t = reference::tangential_axes(a);
            const auto t0 = static_cast<std::size_t>(t[0]);
            const auto t1 = static_cast<std::size_t>(t[1]);
            for (std::size_t d1 = 0; d1 < 2; ++d1)
                for (std::size_t d0 = 0; d0 < 2; ++d0) {
                    if (ijk[t0] + d0 < 1 || ijk[t1] + d1 < 1) continue;
                    auto p = ijk;
                    p[t0] = ijk[t0] + d0 - 1;
                    p[t1] = ijk[t1] + d1 - 1;
                    if (p[t0] >= nn_[t0] || p[t1] >= nn_[t1]) continue;
                    faces.push_back(face_index(a, p[0], p[1], p[2]));
                }
        }
        return faces;
    }

    [[nodiscard]] VertexStar vertex_star(std::size_t v) const
    {
        if (v >= num_vertices_) throw InvalidArgument("vertex id out of range: " + std::to_string(v));
        VertexStar s;
        s.cells = vertex_cells(v);
        s.faces = vertex_faces(v);
        for (std::size_t f : s.faces) s.face_corners.push_back(face_vertices(f));
        return s;
    }

private:
    DomainBox box_;
    std::array<int, 3> n_{};
    std::array<std::size_t, 3> nn_{};
    Vec3 h_{};
    std::size_t num_cells_ = 0;
    std::size_t num_vertices_ = 0;
    std::size_t num_faces_ = 0;
    std::array<std::size_t, 4> face_offset_{};
    std::array<std::array<std::size_t, 3>, 3> face_dims_{};
    BoundaryTags tags_;
};

inline StructuredMesh build_mesh(const DomainBox& box, std::array<int, 3> n, const BoundaryRule& rule = all_dirichlet())
{
    return StructuredMesh(box, n, rule);
}

}  // namespace msmfe

#endif  // MSMFE_MESH_HPP
