#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <set>

#include "msmfe/material.hpp"
#include "msmfe/mesh.hpp"
#include "msmfe/parallel.hpp"

using namespace msmfe;

TEST(Mesh, CountsOnTwoCubed)
{
    const StructuredMesh m(DomainBox{}, {2, 2, 2});
    EXPECT_EQ(m.num_cells(), 8u);
    EXPECT_EQ(m.num_vertices(), 27u);
    EXPECT_EQ(m.num_faces(), 36u);
    const std::size_t center = m.vertex_index(1, 1, 1);
    EXPECT_EQ(m.vertex_cells(center).size(), 8u);
    EXPECT_EQ(m.vertex_faces(center).size(), 12u);
    EXPECT_EQ(m.vertex_cells(m.vertex_index(0, 0, 0)).size(), 1u);
}

TEST(Mesh, FaceCellAdjacencyIsConsistent)
{
    const StructuredMesh m(DomainBox{{0.0, 0.0, 0.0}, {2.0, 1.0, 3.0}}, {3, 2, 4});
    std::size_t boundary = 0;
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        const auto cf = m.cell_faces(c);
        for (int lf = 0; lf < 6; ++lf) {
            const auto fc = m.face_cells(cf[static_cast<std::size_t>(lf)]);
            EXPECT_TRUE(fc[0] == c || fc[1] == c);
        }
    }
    for (std::size_t f = 0; f < m.num_faces(); ++f) {
        const auto fc = m.face_cells(f);
        const bool b = fc[0] == npos || fc[1] == npos;
        EXPECT_EQ(b, m.is_boundary_face(f));
        boundary += b;
    }
    EXPECT_EQ(boundary, 2u * (3 * 2 + 2 * 4 + 3 * 4));
    EXPECT_NEAR(m.h()[2], 0.75, 1e-15);
}

TEST(Mesh, CellVerticesMatchGeometry)
{
    const StructuredMesh m(DomainBox{}, {3, 3, 3});
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
        const auto map = m.cell_map(c);
        const auto cv = m.cell_vertices(c);
        for (int i = 0; i < 8; ++i) {
            const Vec3 a = map.to_physical(reference::vertex_point(i));
            const Vec3 b = m.vertex_point(cv[static_cast<std::size_t>(i)]);
            for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-14);
        }
    }
}

TEST(Mesh, RejectsBadInput)
{
    EXPECT_THROW(StructuredMesh(DomainBox{}, {0, 2, 2}), InvalidArgument);
    EXPECT_THROW(StructuredMesh(DomainBox{{0, 0, 0}, {1, 0, 1}}, {2, 2, 2}), InvalidArgument);
    EXPECT_THROW(StructuredMesh(DomainBox{}, {2, 2, 2}, [](int, const Vec3&) { return BoundaryTag::neumann; }),
                 InvalidArgument);
}

TEST(Material, ComplianceInvertsStiffness)
{
    const Lame p{123.0, 79.3};
    const Mat3 e{{{0.1, 0.2, -0.3}, {0.2, 0.5, 0.05}, {-0.3, 0.05, -0.4}}};
    const Mat3 back = apply_compliance(p, apply_stiffness(p, e));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(back[i][j], e[i][j], 1e-14);
}

TEST(Material, SkewPartScalesByTwoMu)
{
    const Lame p{5.0, 2.0};
    const Mat3 w = xi({0.3, -0.2, 0.9});
    const Mat3 a = apply_compliance(p, w);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(a[i][j], w[i][j] / 4.0, 1e-15);
}

TEST(Material, YoungPoissonConversion)
{
    const Lame p = lame_from_E_nu(1e5, 0.4);
    EXPECT_NEAR(p.mu, 1e5 / 2.8, 1e-9);
    EXPECT_NEAR(p.lambda, 1e5 * 0.4 / (1.4 * 0.2), 1e-7);
    EXPECT_THROW(lame_from_E_nu(1e5, 0.5), InvalidArgument);
    EXPECT_THROW(lame_from_E_nu(-1.0, 0.3), InvalidArgument);
    EXPECT_THROW(validate_lame({1.0, 0.0}), InvalidArgument);
}

TEST(Material, InclusionContrastUsesCellSideAtCorners)
{
    const auto f = ComplianceField::example2(1e6);
    EXPECT_TRUE(f.piecewise());
    EXPECT_DOUBLE_EQ(f({0.25, 0.25, 0.25}).mu, 1e6);
    EXPECT_DOUBLE_EQ(f({0.75, 0.25, 0.25}).mu, 1.0);
    // corner on the interface, read from a cell inside and outside the inclusion
    const Vec3 corner{0.5, 0.5, 0.5};
    EXPECT_DOUBLE_EQ(f.at_corner(corner, {0.25, 0.25, 0.25}).mu, 1e6);
    EXPECT_DOUBLE_EQ(f.at_corner(corner, {0.75, 0.25, 0.25}).mu, 1.0);
    EXPECT_THROW(ComplianceField::example2(0.0), InvalidArgument);
}

TEST(Parallel, CoversRangeAndPropagatesErrors)
{
    std::vector<int> hits(1000, 0);
    parallel_for(0, hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    EXPECT_THROW(parallel_for(0, 1000, [](std::size_t i) {
        if (i == 517) throw SolverError("boom");
    }, 4), SolverError);
}

TEST(Parallel, ThreadCountFromEnvironment)
{
    ::setenv("MSMFE_NUM_THREADS", "3", 1);
    EXPECT_EQ(num_threads(), 3u);
    ::setenv("MSMFE_NUM_THREADS", "junk", 1);
    EXPECT_GE(num_threads(), 1u);
    ::unsetenv("MSMFE_NUM_THREADS");
}
