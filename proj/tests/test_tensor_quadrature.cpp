#include <gtest/gtest.h>

#include <cmath>

#include "msmfe/quadrature.hpp"
#include "msmfe/tensor.hpp"

using namespace msmfe;

TEST(Tensor, XiPairingIsTwiceTheDotProduct)
{
    const Vec3 p{0.3, -1.2, 2.5}, q{-0.7, 0.4, 1.1};
    EXPECT_NEAR(contract(xi(p), xi(q)), 2.0 * dot(p, q), 1e-14);
}

TEST(Tensor, XiActsAsCrossProduct)
{
    const Vec3 p{1.0, 2.0, 3.0}, q{-2.0, 0.5, 4.0};
    const Mat3 w = xi(p);
    const Vec3 c{p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]};
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(w[i][0] * q[0] + w[i][1] * q[1] + w[i][2] * q[2], c[i], 1e-14);
    const Vec3 back = xi_inverse(w);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(back[i], p[i]);
}

TEST(Tensor, AxisThreeRotationEntries)
{
    const Mat3 w = xi({0.0, 0.0, 1.0});
    EXPECT_EQ(w[0][1], -1.0);
    EXPECT_EQ(w[1][0], 1.0);
    EXPECT_EQ(w[2][2], 0.0);
}

TEST(Tensor, SOperatorInverse)
{
    const Mat3 t{{{1.0, 2.0, -1.0}, {0.5, -3.0, 4.0}, {2.0, 1.0, 0.25}}};
    const Mat3 s = s_operator(t);
    const Mat3 back = 0.5 * trace(s) * identity_matrix() - transpose(s);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(back[i][j], t[i][j], 1e-14);
}

TEST(Quadrature, GaussCubeIntegratesQuinticExactly)
{
    const auto q = gauss_cube(3);
    double s = 0.0;
    for (const auto& p : q) s += p.w * std::pow(p.x[0], 5) * std::pow(p.x[1], 4) * p.x[2];
    EXPECT_NEAR(s, (1.0 / 6.0) * (1.0 / 5.0) * 0.5, 1e-15);
}

TEST(Quadrature, GaussOrdersSumToOne)
{
    for (int n = 1; n <= 3; ++n) {
        double s = 0.0;
        for (const auto& p : gauss_cube(n)) s += p.w;
        EXPECT_NEAR(s, 1.0, 1e-15);
        double t = 0.0;
        for (const auto& p : gauss_square(n)) t += p[2];
        EXPECT_NEAR(t, 1.0, 1e-15);
    }
    EXPECT_THROW(gauss_1d(4), InvalidArgument);
}

TEST(Quadrature, TrapezoidRuleWeightsAndNodes)
{
    const auto q = trapezoid_cube(3, 0.0);
    ASSERT_EQ(q.size(), 64u);
    double s = 0.0, lin = 0.0;
    for (const auto& p : q) {
        s += p.w;
        lin += p.w * (p.x[0] + 2.0 * p.x[1] * p.x[2]);
    }
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_NEAR(lin, 0.5 + 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(q.front().w, 1.0 / 216.0);
    const auto inset = trapezoid_cube(3);
    EXPECT_GT(inset.front().x[0], 0.0);
    EXPECT_LT(inset.back().x[2], 1.0);
    EXPECT_THROW(trapezoid_cube(0), InvalidArgument);
}
