#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "msmfe/msmfe.hpp"
#include "test_support.hpp"

using namespace msmfe;

namespace {

const std::vector<Vec3> probe_points{{0.13, 0.41, 0.77}, {0.62, 0.28, 0.35}, {0.81, 0.66, 0.12}, {0.3, 0.9, 0.55}};

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto p = std::filesystem::temp_directory_path() / ("msmfe_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(Manufactured, DerivativesMatchFiniteDifferences)
{
    for (const auto& mc : {example1(), example2(), example3(1.0), example3(9.0)}) {
        const auto d = derivative_check(mc, probe_points);
        EXPECT_LT(d.grad, 1e-6) << mc.name;
        EXPECT_LT(d.force, 1e-6) << mc.name;
    }
}

TEST(Manufactured, Example1VanishesOnLeftFace)
{
    const auto mc = example1();
    for (double y : {0.0, 0.3, 1.0})
        for (double z : {0.0, 0.7}) EXPECT_LT(norm(mc.u({0.0, y, z})), 1e-15);
}

TEST(Manufactured, Example2StressContinuousAcrossInterface)
{
    const auto mc = example2();
    constexpr double eps = 1e-9;
    for (const Vec3 x : {Vec3{0.5, 0.2, 0.3}, Vec3{0.4, 0.5, 0.1}, Vec3{0.3, 0.35, 0.5}}) {
        Vec3 in = x, out = x;
        for (std::size_t a = 0; a < 3; ++a)
            if (x[a] == 0.5) {
                in[a] -= eps;
                out[a] += eps;
            }
        const Mat3 d = mc.sigma(in) - mc.sigma(out);
        EXPECT_LT(frobenius_norm(d), 1e-6 * frobenius_norm(mc.sigma(in)));
        EXPECT_GT(norm(mc.u(in) - mc.u(out)), 1e-3 * norm(mc.u(in)));
    }
}

TEST(Manufactured, Example3PoissonRatioFromExponent)
{
    const auto mc = example3(9.0);
    const Lame l = mc.material({0.5, 0.5, 0.5});
    const double nu = l.lambda / (2.0 * (l.lambda + l.mu));
    EXPECT_NEAR(0.5 - nu, 1e-9, 1e-12);
    EXPECT_EQ(mc.error_rule, ErrorRule::trapezoid3);
}

TEST(Study, RatesAndLevelValidation)
{
    const auto rows = convergence_study(example1(), Method::msmfe1, {2, 4});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(std::isnan(rows[0].errors.rate[0]));
    EXPECT_NEAR(rows[1].errors.rate[0], std::log2(rows[0].errors.sigma / rows[1].errors.sigma), 1e-14);
    EXPECT_LT(rows[1].errors.sigma, rows[0].errors.sigma);
    EXPECT_THROW(convergence_study(example1(), Method::msmfe1, {}), InvalidArgument);
    EXPECT_THROW(convergence_study(example1(), Method::msmfe1, {2, 3}), InvalidArgument);
}

TEST(Study, ErrorRulesDiffer)
{
    const auto s = msmfe::testing::solve_case(example1(), Method::msmfe0, 2);
    const auto a = error_norms(s.mesh, s.result.system, s.result.fields, example1(), ErrorRule::gauss3);
    const auto b = error_norms(s.mesh, s.result.system, s.result.fields, example1(), ErrorRule::trapezoid3);
    EXPECT_NE(a.sigma, b.sigma);
    EXPECT_NEAR(a.sigma, b.sigma, 0.2 * a.sigma);
}

TEST(Config, ParsesKeysCommentsAndOverrides)
{
    const auto c = parse_config_text("# run\nmethod = msmfe1\nexample=3\nlevels=2,4,8\nnu_exponent = 9\n"
                                     "solver=pcg\ntol=1e-10\nemit_csv=true\noutput_dir=out\n");
    EXPECT_EQ(c.resolved_method(), Method::msmfe1);
    EXPECT_EQ(c.example, ExampleKind::example3);
    EXPECT_EQ(c.levels, (std::vector<int>{2, 4, 8}));
    EXPECT_DOUBLE_EQ(*c.nu_exponent, 9.0);
    EXPECT_EQ(c.solver.kind, SolverKind::pcg);
    EXPECT_TRUE(c.emit_csv);
    EXPECT_NO_THROW(validate_config(c));
    const auto mc = make_case(c);
    const Lame l = mc.material({0.1, 0.1, 0.1});
    EXPECT_NEAR(0.5 - l.lambda / (2.0 * (l.lambda + l.mu)), 1e-9, 1e-12);
}

TEST(Config, ErrorsCarryLineNumbers)
{
    auto message = [](const std::string& text) {
        try {
            (void)parse_config_text(text, "run.cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("method=msmfe0\nlevels 2,4\n").find("run.cfg:2"), std::string::npos);
    EXPECT_NE(message("levels=2\nlevels=4\n").find("duplicate"), std::string::npos);
    EXPECT_NE(message("\n\nbogus=1\n").find("run.cfg:3"), std::string::npos);
    EXPECT_NE(message("tol=abc\n").find("tol"), std::string::npos);
    EXPECT_NE(message("method=msmfe2\n").find("msmfe2"), std::string::npos);
}

TEST(Config, SemanticValidation)
{
    RunConfig c;
    try {
        validate_config(c);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("levels required"), std::string::npos);
    }
    c.levels = {4, 2};
    EXPECT_THROW(validate_config(c), ConfigError);
    c.levels = {2};
    c.kappa = 10.0;
    EXPECT_THROW(validate_config(c), ConfigError);
    c = parse_config_text("example=custom\nlevels=2\nlambda=1\n");
    EXPECT_THROW(validate_config(c), ConfigError);
    c = parse_config_text("example=3\nlevels=2\nnu_exponent=20\n");
    EXPECT_THROW(validate_config(c), ConfigError);
    EXPECT_THROW(validate_config(parse_config_text("levels=2\ntol=2\n")), ConfigError);
    EXPECT_EQ(ConfigError("x").category(), ErrorCategory::validation);
    EXPECT_EQ(static_cast<int>(ErrorCategory::validation), 2);
    EXPECT_EQ(static_cast<int>(ErrorCategory::solver), 3);
    EXPECT_EQ(static_cast<int>(ErrorCategory::io), 4);
    EXPECT_EQ(static_cast<int>(ErrorCategory::verification), 5);
}

TEST(Config, SerializationRoundTrips)
{
    auto c = parse_config_text("method=msmfe1-scaled\nexample=custom\nlevels=1,2\nE=12345.678\nnu_exponent=3.25\n"
                               "solver=direct\nmaxit=77\nrotation_form=exact\ndirichlet_rule=gauss3\nload_rule=gauss3\n"
                               "error_rule=gauss3\nemit_vtk=true\ncheck_oracle=true\noutput_dir=/tmp/x y\n");
    const auto back = parse_config_text(serialize_config(c));
    EXPECT_EQ(back, c);
}

TEST(Config, MissingFileIsIoError)
{
    try {
        (void)load_config("/nonexistent/msmfe.cfg");
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_EQ(e.category(), ErrorCategory::io);
    }
}

TEST(Output, NumberFormats)
{
    EXPECT_EQ(format_error(5.6104e-2), "5.610E-02");
    EXPECT_EQ(format_rate(std::nan("")), "-");
    EXPECT_EQ(format_rate(1.996), "2.00");
}

TEST(Output, CsvTable)
{
    const auto rows = convergence_study(example1(), Method::msmfe0, {1, 2});
    const std::string csv = format_csv(rows);
    std::istringstream in(csv);
    std::string header, first, second;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, second);
    EXPECT_EQ(header, "h,sigma_error,sigma_rate,div_error,div_rate,u_error,u_rate,qu_error,qu_rate,gamma_error,gamma_rate");
    EXPECT_EQ(first.rfind("1/1,", 0), 0u);
    EXPECT_NE(first.find(",-"), std::string::npos);
    EXPECT_EQ(second.rfind("1/2,", 0), 0u);
}

TEST(Output, VtkHasCellAndPointData)
{
    const auto s = msmfe::testing::solve_case(example1(), Method::msmfe1, 2);
    const std::string v = format_vtk(s.mesh, &s.result.system, &s.result.fields);
    EXPECT_NE(v.find("DATASET RECTILINEAR_GRID"), std::string::npos);
    EXPECT_NE(v.find("DIMENSIONS 3 3 3"), std::string::npos);
    EXPECT_NE(v.find("CELL_DATA 8"), std::string::npos);
    EXPECT_NE(v.find("POINT_DATA 27"), std::string::npos);
    EXPECT_NE(v.find("displacement"), std::string::npos);
    EXPECT_NE(v.find("stress_row_2"), std::string::npos);
    const std::string g = format_vtk(s.mesh);
    EXPECT_EQ(g.find("CELL_DATA"), std::string::npos);
}

TEST(Output, WritesFilesAndReportsBadPaths)
{
    const auto dir = scratch_dir("out");
    const auto s = msmfe::testing::solve_case(example1(), Method::msmfe0, 2);
    const auto path = (dir / "nested" / "a.vtk").string();
    write_vtk(s.mesh, path, &s.result.system, &s.result.fields);
    EXPECT_TRUE(std::filesystem::exists(path));
    std::ofstream(dir / "file") << "x";
    EXPECT_THROW(write_text((dir / "file" / "b.csv").string(), "x"), IoError);
    std::filesystem::remove_all(dir);
}

TEST(Output, CellAverageStressOfConstantField)
{
    const Mat3 g = msmfe::testing::sample_gradient();
    const auto mc = msmfe::testing::linear_case(g, {0.0, 0.0, 0.0});
    const auto s = msmfe::testing::solve_case(mc, Method::msmfe0, 2);
    const auto avg = cell_average_stress(s.mesh, s.result.system, s.result.fields);
    const Mat3 exact = mc.sigma({0.5, 0.5, 0.5});
    for (const auto& m : avg) EXPECT_LT(frobenius_norm(m - exact), 1e-10 * frobenius_norm(exact));
}

TEST(Output, CsvIndependentOfThreadCount)
{
    ::setenv("MSMFE_NUM_THREADS", "1", 1);
    const std::string a = format_csv(convergence_study(example2(), Method::msmfe1_scaled, {2, 4}));
    ::setenv("MSMFE_NUM_THREADS", "4", 1);
    const std::string b = format_csv(convergence_study(example2(), Method::msmfe1_scaled, {2, 4}));
    ::unsetenv("MSMFE_NUM_THREADS");
    EXPECT_EQ(a, b);
}
