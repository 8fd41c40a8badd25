#ifndef MSMFE_TENSOR_HPP
#define MSMFE_TENSOR_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace msmfe {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline constexpr Vec3 unit_vector(int axis)
{
    Vec3 e{0.0, 0.0, 0.0};
    e[static_cast<std::size_t>(axis)] = 1.0;
    return e;
}

inline constexpr Mat3 zero_matrix() { return Mat3{}; }

inline constexpr Mat3 identity_matrix()
{
    Mat3 m{};
    for (std::size_t i = 0; i < 3; ++i) m[i][i] = 1.0;
    return m;
}

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Mat3 operator+(const Mat3& a, const Mat3& b)
{
    Mat3 c{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline Mat3 operator-(const Mat3& a, const Mat3& b)
{
    Mat3 c{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c[i][j] = a[i][j] - b[i][j];
    return c;
}

inline Mat3 operator*(double s, const Mat3& a)
{
    Mat3 c{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c[i][j] = s * a[i][j];
    return c;
}

inline Mat3 transpose(const Mat3& a)
{
    Mat3 c{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c[i][j] = a[j][i];
    return c;
}

inline double trace(const Mat3& a) { return a[0][0] + a[1][1] + a[2][2]; }

/// Frobenius inner product a : b.
inline double contract(const Mat3& a, const Mat3& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) s += a[i][j] * b[i][j];
    return s;
}

inline Mat3 skew_part(const Mat3& a) { return 0.5 * (a - transpose(a)); }
inline Mat3 sym_part(const Mat3& a) { return 0.5 * (a + transpose(a)); }

/// Skew matrix with Xi(p) q = p x q.
inline Mat3 xi(const Vec3& p)
{
    return Mat3{{{0.0, -p[2], p[1]}, {p[2], 0.0, -p[0]}, {-p[1], p[0], 0.0}}};
}

/// Inverse of xi on skew matrices.
inline Vec3 xi_inverse(const Mat3& w) { return {w[2][1], w[0][2], w[1][0]}; }

/// S(tau) = tr(tau) I - tau^T.
inline Mat3 s_operator(const Mat3& tau) { return trace(tau) * identity_matrix() - transpose(tau); }

inline Mat3 outer(const Vec3& a, const Vec3& b)
{
    Mat3 c{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c[i][j] = a[i] * b[j];
    return c;
}

inline double frobenius_norm(const Mat3& a) { return std::sqrt(contract(a, a)); }

}  // namespace msmfe

#endif  // MSMFE_TENSOR_HPP
