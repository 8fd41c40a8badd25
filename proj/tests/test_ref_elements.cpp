#include <gtest/gtest.h>

#include <cmath>

#include "msmfe/assembly.hpp"
#include "msmfe/ref_elements.hpp"
#include "msmfe/verification.hpp"

using namespace msmfe;

TEST(Ert0, DualityAndUnisolvence)
{
    const auto& b = ert0_basis();
    EXPECT_LT(b.duality_residual(), 1e-12);
    EXPECT_GT(std::abs(b.vandermonde_determinant()), 1e-8);
}

TEST(Ert0, NormalComponentIsBilinearOnEachFace)
{
    // normal component of basis (face, corner) on its face equals the face hat function
    const auto& b = ert0_basis();
    for (int face = 0; face < 6; ++face)
        for (int corner = 0; corner < 4; ++corner) {
            const int k = Ert0Basis::index(face, corner);
            for (double s : {0.0, 0.3, 0.5, 1.0})
                for (double t : {0.0, 0.8, 1.0}) {
                    const Vec3 v = b.eval(k, reference::face_point(face, s, t));
                    const double n = dot(reference::outward_normal(face), v);
                    EXPECT_NEAR(n, reference::face_hat(corner, s, t), 1e-12);
                }
        }
}

TEST(Ert0, DivergenceIsConstantPerBasis)
{
    const auto& b = ert0_basis();
    for (int k = 0; k < 24; ++k) {
        const Polynomial d = divergence(b.polynomial(k));
        const double d0 = b.div(k);
        EXPECT_NEAR(std::abs(d0), 0.25, 1e-12);
        for (const Vec3 x : {Vec3{0.1, 0.2, 0.3}, Vec3{0.9, 0.5, 0.7}}) EXPECT_NEAR(d(x), d0, 1e-12);
    }
}

TEST(Ert0, VertexRuleMatchesLowestOrderMoments)
{
    // vertex sums keep the normal moments and drop the tangential ones
    const auto& tab = reference_tables();
    for (int k = 0; k < 24; ++k) {
        const int axis = reference::face_axis(k / 4);
        for (int c = 0; c < 3; ++c) {
            const double v = tab.vertex_integral[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
            const double e = tab.integral[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
            if (c == axis) {
                EXPECT_NEAR(v, e, 1e-14);
            } else {
                EXPECT_NEAR(v, 0.0, 1e-14);
                EXPECT_NEAR(std::abs(e), 1.0 / 24.0, 1e-14);
            }
        }
    }
}

TEST(Theta, VandermondeInvertibleAndTraceConforming)
{
    const auto& t = theta_basis();
    EXPECT_GT(t.min_singular_value(), 1e-6);
    EXPECT_LT(theta_tangential_trace_residual(), 1e-12);
}

TEST(Theta, CurlLandsInErt0WithFullDivergenceFreeRank)
{
    double res = 1.0;
    const DenseMatrix cm = theta_basis().curl_matrix(&res);
    EXPECT_LT(res, 1e-12);
    EXPECT_EQ(divergence_free_dimension(), 23u);
    EXPECT_EQ(numerical_rank(cm), 23u);
}

TEST(Theta, CurlXiPairingHoldsWithFactorOneHalf)
{
    const auto id = sample_sxi_identity(100);
    EXPECT_LT(id.halved, 1e-12);
    // with Xi(p):Xi(q) = 2 p.q the unscaled form is off by exactly a factor of two
    EXPECT_NEAR(id.literal, 0.5, 1e-10);
}

TEST(Skew, VertexRotationBasisIsNodal)
{
    const Mat3 a = skew_eval(SkewVariant::w1, 3 * 0 + 0, reference::vertex_point(0));
    const Mat3 e = xi({1.0, 0.0, 0.0});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(a[i][j], e[i][j]);
    const Mat3 z = skew_eval(SkewVariant::w1, 0, reference::vertex_point(6));
    EXPECT_DOUBLE_EQ(frobenius_norm(z), 0.0);
    const Mat3 c = skew_eval(SkewVariant::w1, 3 * 6 + 1, {0.5, 0.5, 0.5});
    const Mat3 ec = xi({0.0, 0.125, 0.0});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(c[i][j], ec[i][j], 1e-15);
}

TEST(Verification, SuiteRequiredChecksPass)
{
    for (const auto& c : reference_element_suite(50))
        if (c.required) EXPECT_TRUE(c.passed) << c.name << " = " << c.value;
}
