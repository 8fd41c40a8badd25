#ifndef MSMFE_REF_ELEMENTS_HPP
#define MSMFE_REF_ELEMENTS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msmfe/dense.hpp"
#include "msmfe/errors.hpp"
#include "msmfe/polynomial.hpp"
#include "msmfe/tensor.hpp"

namespace msmfe {

// ---------------------------------------------------------------------------
// Reference cube geometry.
//
// Vertices r1..r8 (stored 0..7):
//   (0,0,0) (1,0,0) (1,1,0) (0,1,0) (0,0,1) (1,0,1) (1,1,1) (0,1,1)
// Faces 0..5: -x, +x, -y, +y, -z, +z. Face corners are numbered
// lexicographically in the two tangential coordinates (lower axis fastest).
// ---------------------------------------------------------------------------
namespace reference {

inline constexpr std::array<std::array<int, 3>, 8> vertices{{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
}};

inline constexpr int num_faces = 6;
inline constexpr int corners_per_face = 4;

inline constexpr int face_axis(int face) { return face / 2; }
inline constexpr int face_side(int face) { return face % 2; }
inline constexpr double outward_sign(int face) { return face_side(face) == 1 ? 1.0 : -1.0; }

inline constexpr std::array<int, 2> tangential_axes(int axis)
{
    return axis == 0 ? std::array<int, 2>{1, 2} : (axis == 1 ? std::array<int, 2>{0, 2} : std::array<int, 2>{0, 1});
}

inline Vec3 outward_normal(int face)
{
    Vec3 n{0.0, 0.0, 0.0};
    n[static_cast<std::size_t>(face_axis(face))] = outward_sign(face);
    return n;
}

inline Vec3 vertex_point(int v)
{
    const auto& r = vertices[static_cast<std::size_t>(v)];
    return {double(r[0]), double(r[1]), double(r[2])};
}

inline constexpr int vertex_from_coords(int x, int y, int z)
{
    for (int v = 0; v < 8; ++v) {
        const auto& r = vertices[static_cast<std::size_t>(v)];
        if (r[0] == x && r[1] == y && r[2] == z) return v;
    }
    return -1;
}

/// Integer coordinates of corner `corner` of face `face`.
inline constexpr std::array<int, 3> face_corner_coords(int face, int corner)
{
    const int a = face_axis(face);
    const auto t = tangential_axes(a);
    std::array<int, 3> c{0, 0, 0};
    c[static_cast<std::size_t>(a)] = face_side(face);
    c[static_cast<std::size_t>(t[0])] = corner % 2;
    c[static_cast<std::size_t>(t[1])] = corner / 2;
    return c;
}

inline constexpr int face_corner_vertex(int face, int corner)
{
    const auto c = face_corner_coords(face, corner);
    return vertex_from_coords(c[0], c[1], c[2]);
}

inline Vec3 face_point(int face, double s, double t)
{
    const int a = face_axis(face);
    const auto tg = tangential_axes(a);
    Vec3 p{0.0, 0.0, 0.0};
    p[static_cast<std::size_t>(a)] = face_side(face);
    p[static_cast<std::size_t>(tg[0])] = s;
    p[static_cast<std::size_t>(tg[1])] = t;
    return p;
}

/// Face / corner pair touching a reference vertex.
struct VertexSlot {
    int face;
    int corner;
};

/// The three faces meeting at vertex v, ordered by axis.
inline constexpr std::array<VertexSlot, 3> vertex_slots(int v)
{
    const auto& r = vertices[static_cast<std::size_t>(v)];
    std::array<VertexSlot, 3> slots{};
    for (int a = 0; a < 3; ++a) {
        const int face = 2 * a + r[static_cast<std::size_t>(a)];
        const auto t = tangential_axes(a);
        const int corner = r[static_cast<std::size_t>(t[0])] + 2 * r[static_cast<std::size_t>(t[1])];
        slots[static_cast<std::size_t>(a)] = {face, corner};
    }
    return slots;
}

/// Trilinear nodal function of vertex v.
inline double hat(int v, const Vec3& x)
{
    const auto& r = vertices[static_cast<std::size_t>(v)];
    double h = 1.0;
    for (std::size_t a = 0; a < 3; ++a) h *= r[a] == 1 ? x[a] : 1.0 - x[a];
    return h;
}

/// Bilinear nodal function of face corner `corner` in face coordinates (s, t).
inline double face_hat(int corner, double s, double t)
{
    return (corner % 2 == 1 ? s : 1.0 - s) * (corner / 2 == 1 ? t : 1.0 - t);
}

}  // namespace reference

namespace detail {

inline Polynomial mono(double c, int a, int b, int d) { return Polynomial::monomial(c, a, b, d); }

/// Solves the least-squares problem min |F c - b| over the span of `fields`, in monomial
/// coefficient space. Returns the coefficients and writes the residual norm.
inline std::vector<double> project_onto_fields(const std::vector<VecPoly>& fields, const VecPoly& target,
                                               double* residual)
{
    std::map<std::pair<int, Exponent>, std::size_t> keys;
    auto collect = [&](const VecPoly& v) {
        for (int c = 0; c < 3; ++c)
            for (const auto& [e, coef] : v[static_cast<std::size_t>(c)].terms())
                keys.try_emplace({c, e}, keys.size());
    };
    for (const auto& f : fields) collect(f);
    collect(target);
    const std::size_t rows = keys.size();
    const std::size_t n = fields.size();
    DenseMatrix a(rows, n);
    std::vector<double> b(rows, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (int c = 0; c < 3; ++c)
            for (const auto& [e, coef] : fields[j][static_cast<std::size_t>(c)].terms()) a(keys.at({c, e}), j) = coef;
    for (int c = 0; c < 3; ++c)
        for (const auto& [e, coef] : target[static_cast<std::size_t>(c)].terms()) b[keys.at({c, e})] = coef;

    DenseMatrix normal = a.transposed() * a;
    std::vector<double> rhs(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < rows; ++i) rhs[j] += a(i, j) * b[i];
    LuFactorization lu(normal);
    auto coef = lu.solve(rhs);
    if (residual != nullptr) {
        const auto fit = a.multiply(coef);
        double r = 0.0;
        for (std::size_t i = 0; i < rows; ++i) r += (fit[i] - b[i]) * (fit[i] - b[i]);
        *residual = std::sqrt(r);
    }
    return coef;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Enhanced Raviart-Thomas space of lowest order on the unit cube.
// ---------------------------------------------------------------------------

/// The 24 vector fields spanning the space: RT0 plus the curls of the enhancement set.
inline std::vector<VecPoly> ert0_fields()
{
    using detail::mono;
    const Polynomial zero;
    std::vector<VecPoly> f;
    f.reserve(24);
    // RT0
    f.push_back(vec_poly(mono(1, 0, 0, 0), zero, zero));
    f.push_back(vec_poly(mono(1, 1, 0, 0), zero, zero));
    f.push_back(vec_poly(zero, mono(1, 0, 0, 0), zero));
    f.push_back(vec_poly(zero, mono(1, 0, 1, 0), zero));
    f.push_back(vec_poly(zero, zero, mono(1, 0, 0, 0)));
    f.push_back(vec_poly(zero, zero, mono(1, 0, 0, 1)));
    // enhancement, x-group
    f.push_back(vec_poly(mono(-3, 0, 1, 0), zero, zero));
    f.push_back(vec_poly(mono(-3, 0, 0, 1), zero, zero));
    f.push_back(vec_poly(mono(-4, 0, 1, 1), zero, zero));
    f.push_back(vec_poly(mono(-3, 1, 1, 0), mono(1, 0, 2, 0), mono(1, 0, 1, 1)));
    f.push_back(vec_poly(mono(-3, 1, 0, 1), mono(1, 0, 1, 1), mono(1, 0, 0, 2)));
    f.push_back(vec_poly(mono(-4, 1, 1, 1), mono(1, 0, 2, 1), mono(1, 0, 1, 2)));
    // y-group
    f.push_back(vec_poly(zero, mono(-3, 1, 0, 0), zero));
    f.push_back(vec_poly(zero, mono(-3, 0, 0, 1), zero));
    f.push_back(vec_poly(zero, mono(-4, 1, 0, 1), zero));
    f.push_back(vec_poly(mono(1, 2, 0, 0), mono(-3, 1, 1, 0), mono(1, 1, 0, 1)));
    f.push_back(vec_poly(mono(1, 1, 0, 1), mono(-3, 0, 1, 1), mono(1, 0, 0, 2)));
    f.push_back(vec_poly(mono(1, 2, 0, 1), mono(-4, 1, 1, 1), mono(1, 1, 0, 2)));
    // z-group
    f.push_back(vec_poly(zero, zero, mono(-3, 1, 0, 0)));
    f.push_back(vec_poly(zero, zero, mono(-3, 0, 1, 0)));
    f.push_back(vec_poly(zero, zero, mono(-4, 1, 1, 0)));
    f.push_back(vec_poly(mono(1, 2, 0, 0), mono(1, 1, 1, 0), mono(-3, 1, 0, 1)));
    f.push_back(vec_poly(mono(1, 1, 1, 0), mono(1, 0, 2, 0), mono(-3, 0, 1, 1)));
    f.push_back(vec_poly(mono(1, 2, 1, 0), mono(1, 1, 2, 0), mono(-4, 1, 1, 1)));
    return f;
}

/// Nodal basis of the enhanced RT0 space, dual to the outward normal components at the
/// four corners of each face. Basis index k = 4 * face + corner.
class Ert0Basis {
public:
    static constexpr int size = 24;

    Ert0Basis() : fields_(ert0_fields()), vandermonde_(size, size)
    {
        for (int j = 0; j < size; ++j) {
            const int face = j / 4;
            const auto c = reference::face_corner_coords(face, j % 4);
            const Vec3 p{double(c[0]), double(c[1]), double(c[2])};
            const Vec3 n = reference::outward_normal(face);
            for (int m = 0; m < size; ++m)
                vandermonde_(static_cast<std::size_t>(j), static_cast<std::size_t>(m)) =
                    dot(n, evaluate(fields_[static_cast<std::size_t>(m)], p));
        }
        LuFactorization lu(vandermonde_);
        determinant_ = lu.determinant();
        coefficients_ = lu.inverse();

        basis_.resize(size);
        for (int k = 0; k < size; ++k) {
            VecPoly b;
            for (int m = 0; m < size; ++m) {
                const double c = coefficients_(static_cast<std::size_t>(m), static_cast<std::size_t>(k));
                if (std::abs(c) < 1e-14) continue;
                b = b + c * fields_[static_cast<std::size_t>(m)];
            }
            basis_[static_cast<std::size_t>(k)] = b;
            const Polynomial d = divergence(b);
            divergence_[static_cast<std::size_t>(k)] = d.coefficient({0, 0, 0});
            Vec3 integral{};
            for (std::size_t c = 0; c < 3; ++c) integral[c] = b[c].integral_unit_cube();
            integral_[static_cast<std::size_t>(k)] = integral;
        }
    }

    static int index(int face, int corner) { return 4 * face + corner; }

    [[nodiscard]] Vec3 eval(int k, const Vec3& x) const
    {
        check_index(k);
        return evaluate(basis_[static_cast<std::size_t>(k)], x);
    }

    /// Divergence of basis k (a constant on the cube).
    [[nodiscard]] double div(int k) const
    {
        check_index(k);
        return divergence_[static_cast<std::size_t>(k)];
    }

    /// Exact integral of basis k over the unit cube.
    [[nodiscard]] const Vec3& integral(int k) const
    {
        check_index(k);
        return integral_[static_cast<std::size_t>(k)];
    }

    [[nodiscard]] const VecPoly& polynomial(int k) const
    {
        check_index(k);
        return basis_[static_cast<std::size_t>(k)];
    }

    [[nodiscard]] const std::vector<VecPoly>& fields() const noexcept { return fields_; }
    [[nodiscard]] const DenseMatrix& vandermonde() const noexcept { return vandermonde_; }
    [[nodiscard]] const DenseMatrix& coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] double vandermonde_determinant() const noexcept { return determinant_; }

    /// Expands a field by its d.o.f. values (outward normal components at face corners).
    [[nodiscard]] std::array<double, size> dof_values(const VecPoly& field) const
    {
        std::array<double, size> v{};
        for (int j = 0; j < size; ++j) {
            const int face = j / 4;
            const auto c = reference::face_corner_coords(face, j % 4);
            v[static_cast<std::size_t>(j)] =
                dot(reference::outward_normal(face), evaluate(field, {double(c[0]), double(c[1]), double(c[2])}));
        }
        return v;
    }

    /// max_jk |dof_j(basis_k) - delta_jk|.
    [[nodiscard]] double duality_residual() const
    {
        double r = 0.0;
        for (int k = 0; k < size; ++k) {
            const auto d = dof_values(basis_[static_cast<std::size_t>(k)]);
            for (int j = 0; j < size; ++j) r = std::max(r, std::abs(d[static_cast<std::size_t>(j)] - (j == k ? 1.0 : 0.0)));
        }
        return r;
    }

private:
    static void check_index(int k)
    {
        if (k < 0 || k >= size) throw InvalidArgument("ERT0 basis index out of range: " + std::to_string(k));
    }

    std::vector<VecPoly> fields_;
    DenseMatrix vandermonde_;
    DenseMatrix coefficients_;
    double determinant_ = 0.0;
    std::vector<VecPoly> basis_;
    std::array<double, size> divergence_{};
    std::array<Vec3, size> integral_{};
};

inline const Ert0Basis& ert0_basis()
{
    static const Ert0Basis basis;
    return basis;
}

// ---------------------------------------------------------------------------
// Skew-symmetric rotation bases.
// ---------------------------------------------------------------------------

enum class SkewVariant { w0, w1 };

/// W0: local index = axis (0..2). W1: local index = 3 * vertex + axis (0..23).
inline Mat3 skew_eval(SkewVariant variant, int local_index, const Vec3& x)
{
    if (variant == SkewVariant::w0) {
        if (local_index < 0 || local_index > 2) throw InvalidArgument("W0 index out of range");
        return xi(unit_vector(local_index));
    }
    if (local_index < 0 || local_index > 23) throw InvalidArgument("W1 index out of range");
    return reference::hat(local_index / 3, x) * xi(unit_vector(local_index % 3));
}

// ---------------------------------------------------------------------------
// Auxiliary H(curl) space Theta on the unit cube (verification only).
// ---------------------------------------------------------------------------

inline std::vector<VecPoly> theta_fields()
{
    using detail::mono;
    const Polynomial zero;
    std::vector<VecPoly> f;
    f.reserve(48);
    // Scalar monomials allowed in each single component.
    const std::array<std::vector<Exponent>, 3> per_component{{
        {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1},
         {0, 2, 0}, {0, 0, 2}, {1, 2, 0}, {1, 0, 2}, {0, 2, 1}, {0, 1, 2}},
        {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1},
         {2, 0, 0}, {0, 0, 2}, {2, 1, 0}, {0, 1, 2}, {2, 0, 1}, {1, 0, 2}},
        {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1},
         {2, 0, 0}, {0, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}},
    }};
    for (std::size_t c = 0; c < 3; ++c)
        for (const auto& e : per_component[c]) {
            VecPoly v;
            v[c] = mono(1, e[0], e[1], e[2]);
            f.push_back(v);
        }
    f.push_back(vec_poly(zero, mono(1, 1, 1, 2), mono(-1, 1, 2, 1)));
    f.push_back(vec_poly(mono(-1, 1, 1, 2), zero, mono(1, 2, 1, 1)));
    f.push_back(vec_poly(mono(1, 1, 2, 1), mono(-1, 2, 1, 1), zero));
    f.push_back(vec_poly(mono(2, 1, 2, 1), mono(2, 2, 1, 1), mono(1, 2, 2, 0)));
    f.push_back(vec_poly(mono(2, 1, 1, 2), mono(1, 2, 0, 2), mono(2, 2, 1, 1)));
    f.push_back(vec_poly(mono(1, 0, 2, 2), mono(2, 1, 1, 2), mono(2, 1, 2, 1)));
    return f;
}

/// D.o.f. of Theta: component value at a point.
struct ThetaDof {
    int component;
    Vec3 point;
};

/// Component c at the 8 vertices, then at the midpoints of the 8 edges lying on the
/// faces x_c = 0 and x_c = 1.
inline std::vector<ThetaDof> theta_dofs()
{
    std::vector<ThetaDof> dofs;
    dofs.reserve(48);
    for (int c = 0; c < 3; ++c) {
        for (int v = 0; v < 8; ++v) dofs.push_back({c, reference::vertex_point(v)});
        const auto t = reference::tangential_axes(c);
        for (int side = 0; side < 2; ++side) {
            for (int a = 0; a < 2; ++a) {
                Vec3 p{};
                p[static_cast<std::size_t>(c)] = side;
                p[static_cast<std::size_t>(t[0])] = a;
                p[static_cast<std::size_t>(t[1])] = 0.5;
                dofs.push_back({c, p});
            }
            for (int b = 0; b < 2; ++b) {
                Vec3 p{};
                p[static_cast<std::size_t>(c)] = side;
                p[static_cast<std::size_t>(t[0])] = 0.5;
                p[static_cast<std::size_t>(t[1])] = b;
                dofs.push_back({c, p});
            }
        }
    }
    return dofs;
}

class ThetaBasis {
public:
    static constexpr int size = 48;

    ThetaBasis() : fields_(theta_fields()), dofs_(theta_dofs()), vandermonde_(size, size)
    {
        for (int j = 0; j < size; ++j) {
            const auto& d = dofs_[static_cast<std::size_t>(j)];
            for (int m = 0; m < size; ++m)
                vandermonde_(static_cast<std::size_t>(j), static_cast<std::size_t>(m)) =
                    fields_[static_cast<std::size_t>(m)][static_cast<std::size_t>(d.component)](d.point);
        }
        const auto sv = singular_values(vandermonde_);
        min_singular_value_ = sv.back();
        if (!(sv.back() > 1e-10 * sv.front()))
            throw SolverError("Theta d.o.f. Vandermonde matrix is numerically singular");
        LuFactorization lu(vandermonde_);
        const DenseMatrix inv = lu.inverse();
        basis_.resize(size);
        for (int k = 0; k < size; ++k) {
            VecPoly b;
            for (int m = 0; m < size; ++m) {
                const double c = inv(static_cast<std::size_t>(m), static_cast<std::size_t>(k));
                if (std::abs(c) < 1e-14) continue;
                b = b + c * fields_[static_cast<std::size_t>(m)];
            }
            basis_[static_cast<std::size_t>(k)] = b;
        }
    }

    [[nodiscard]] Vec3 eval(int k, const Vec3& x) const { return evaluate(polynomial(k), x); }

    [[nodiscard]] const VecPoly& polynomial(int k) const
    {
        if (k < 0 || k >= size) throw InvalidArgument("Theta basis index out of range: " + std::to_string(k));
        return basis_[static_cast<std::size_t>(k)];
    }

    /// Coefficients of curl(basis k) in the 24 ERT0 spanning fields; `residual` receives
    /// the norm of the part of the curl outside their span.
    [[nodiscard]] std::vector<double> curl_coefficients(int k, double* residual = nullptr) const
    {
        return detail::project_onto_fields(ert0_fields(), curl(polynomial(k)), residual);
    }

    /// 48 x 24 matrix of curl coefficients of the spanning fields.
    [[nodiscard]] DenseMatrix curl_matrix(double* max_residual = nullptr) const
    {
        const auto ert = ert0_fields();
        DenseMatrix m(size, Ert0Basis::size);
        double worst = 0.0;
        for (int k = 0; k < size; ++k) {
            double r = 0.0;
            const auto c = detail::project_onto_fields(ert, curl(fields_[static_cast<std::size_t>(k)]), &r);
            worst = std::max(worst, r);
            for (int j = 0; j < Ert0Basis::size; ++j) m(static_cast<std::size_t>(k), static_cast<std::size_t>(j)) = c[static_cast<std::size_t>(j)];
        }
        if (max_residual != nullptr) *max_residual = worst;
        return m;
    }

    [[nodiscard]] const std::vector<VecPoly>& fields() const noexcept { return fields_; }
    [[nodiscard]] const std::vector<ThetaDof>& dofs() const noexcept { return dofs_; }
    [[nodiscard]] const DenseMatrix& vandermonde() const noexcept { return vandermonde_; }
    [[nodiscard]] double min_singular_value() const noexcept { return min_singular_value_; }

private:
    std::vector<VecPoly> fields_;
    std::vector<ThetaDof> dofs_;
    DenseMatrix vandermonde_;
    std::vector<VecPoly> basis_;
    double min_singular_value_ = 0.0;
};

inline const ThetaBasis& theta_basis()
{
    static const ThetaBasis basis;
    return basis;
}

/// max over faces F and basis functions whose tangential d.o.f. on F are all zero of the
/// tangential components on F, sampled on a 3x3 grid of points per face.
inline double theta_tangential_trace_residual()
{
    const auto& b = theta_basis();
    double worst = 0.0;
    for (int face = 0; face < 6; ++face) {
        const int a = reference::face_axis(face);
        const double side = reference::face_side(face);
        for (int k = 0; k < ThetaBasis::size; ++k) {
            const auto& d = b.dofs()[static_cast<std::size_t>(k)];
            if (d.component != a && d.point[static_cast<std::size_t>(a)] == side) continue;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const Vec3 v = b.eval(k, reference::face_point(face, 0.5 * i, 0.5 * j));
                    for (int c = 0; c < 3; ++c)
                        if (c != a) worst = std::max(worst, std::abs(v[static_cast<std::size_t>(c)]));
                }
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Matrix-field operators tying Theta to the stress space (verification only).
// ---------------------------------------------------------------------------

/// Matrix polynomial field, one vector polynomial per row.
using MatPoly = std::array<VecPoly, 3>;

inline Mat3 evaluate(const MatPoly& q, const Vec3& x)
{
    Mat3 m{};
    for (std::size_t i = 0; i < 3; ++i) {
        const Vec3 r = evaluate(q[i], x);
        for (std::size_t j = 0; j < 3; ++j) m[i][j] = r[j];
    }
    return m;
}

/// Row-wise curl.
inline MatPoly curl(const MatPoly& q) { return {curl(q[0]), curl(q[1]), curl(q[2])}; }

/// S(q) = tr(q) I - q^T as a polynomial field.
inline MatPoly s_operator(const MatPoly& q)
{
    const Polynomial tr = q[0][0] + q[1][1] + q[2][2];
    MatPoly s;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            s[i][j] = -1.0 * q[j][i];
            if (i == j) s[i][j] += tr;
        }
    return s;
}

/// Row-wise divergence.
inline VecPoly divergence(const MatPoly& q) { return {divergence(q[0]), divergence(q[1]), divergence(q[2])}; }

/// Inverse of S: tau = (tr S / 2) I - S^T.
inline Mat3 s_inverse(const Mat3& s) { return (0.5 * trace(s)) * identity_matrix() - transpose(s); }

/// Both sides of the pointwise pairing between curl q and Xi(div S(q)) against skew w.
struct SXiSample {
    double curl_term;  ///< curl q : w
    double xi_term;    ///< Xi(div S(q)) : w
};

inline SXiSample sxi_sample(const MatPoly& q, const Vec3& w_axial, const Vec3& x)
{
    const Mat3 w = xi(w_axial);
    const Mat3 cq = evaluate(curl(q), x);
    const Vec3 d = evaluate(divergence(s_operator(q)), x);
    return {contract(cq, w), contract(xi(d), w)};
}

/// Residual |curl q : w + Xi(div S(q)) : w| of the pairing as literally written.
inline double sxi_identity_check(const MatPoly& q, const Vec3& w_axial, const Vec3& x)
{
    const auto s = sxi_sample(q, w_axial, x);
    return std::abs(s.curl_term + s.xi_term);
}

/// Residual of the pairing with the factor that makes it an identity for the stated Xi:
/// curl q : Xi(p) = -div S(q) . p = -(1/2) Xi(div S(q)) : Xi(p).
inline double sxi_identity_check_scaled(const MatPoly& q, const Vec3& w_axial, const Vec3& x)
{
    const auto s = sxi_sample(q, w_axial, x);
    return std::abs(s.curl_term + 0.5 * s.xi_term);
}

}  // namespace msmfe

#endif  // MSMFE_REF_ELEMENTS_HPP
