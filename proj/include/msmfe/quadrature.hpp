#ifndef MSMFE_QUADRATURE_HPP
#define MSMFE_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <vector>

#include "msmfe/errors.hpp"
#include "msmfe/tensor.hpp"

namespace msmfe {

struct QuadPoint {
    Vec3 x;
    double w;
};

/// Gauss-Legendre nodes and weights on [0, 1].
inline std::vector<std::array<double, 2>> gauss_1d(int n)
{
    switch (n) {
        case 1: return {{0.5, 1.0}};
        case 2: {
            const double d = 0.5 / std::sqrt(3.0);
            return {{0.5 - d, 0.5}, {0.5 + d, 0.5}};
        }
        case 3: {
            const double d = 0.5 * std::sqrt(0.6);
            return {{0.5 - d, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + d, 5.0 / 18.0}};
        }
        default: throw InvalidArgument("unsupported Gauss order " + std::to_string(n));
    }
}

/// Tensor Gauss rule on the unit cube, x fastest.
inline std::vector<QuadPoint> gauss_cube(int n)
{
    const auto g = gauss_1d(n);
    std::vector<QuadPoint> q;
    q.reserve(g.size() * g.size() * g.size());
    for (const auto& gz : g)
        for (const auto& gy : g)
            for (const auto& gx : g) q.push_back({{gx[0], gy[0], gz[0]}, gx[1] * gy[1] * gz[1]});
    return q;
}

/// Iterated trapezoid rule with m subintervals per direction on the unit cube, x fastest.
/// Nodes are pulled inside by `inset` so that piecewise data evaluates on the owning cell.
inline std::vector<QuadPoint> trapezoid_cube(int m, double inset = 1e-11)
{
    if (m < 1) throw InvalidArgument("trapezoid rule needs at least one subinterval");
    std::vector<std::array<double, 2>> g;
    for (int i = 0; i <= m; ++i) {
        const double x = static_cast<double>(i) / m;
        g.push_back({inset + (1.0 - 2.0 * inset) * x, (i == 0 || i == m) ? 0.5 / m : 1.0 / m});
    }
    std::vector<QuadPoint> q;
    q.reserve(g.size() * g.size() * g.size());
    for (const auto& gz : g)
        for (const auto& gy : g)
            for (const auto& gx : g) q.push_back({{gx[0], gy[0], gz[0]}, gx[1] * gy[1] * gz[1]});
    return q;
}

/// Tensor Gauss rule on the unit square, as (s, t, w).
inline std::vector<std::array<double, 3>> gauss_square(int n)
{
    const auto g = gauss_1d(n);
    std::vector<std::array<double, 3>> q;
    for (const auto& gt : g)
        for (const auto& gs : g) q.push_back({gs[0], gt[0], gs[1] * gt[1]});
    return q;
}

}  // namespace msmfe

#endif  // MSMFE_QUADRATURE_HPP
