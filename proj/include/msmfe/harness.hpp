#ifndef MSMFE_HARNESS_HPP
#define MSMFE_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "msmfe/assembly.hpp"
#include "msmfe/errors.hpp"
#include "msmfe/material.hpp"
#include "msmfe/mesh.hpp"
#include "msmfe/parallel.hpp"
#include "msmfe/quadrature.hpp"
#include "msmfe/reduction.hpp"
#include "msmfe/solver.hpp"
#include "msmfe/tensor.hpp"

namespace msmfe {

/// Volume rule used to integrate the errors and the normalizing norms.
enum class ErrorRule {
    gauss3,     ///< 3x3x3 Gauss
    trapezoid3  ///< iterated trapezoid, three subintervals per direction
};

inline ErrorRule parse_error_rule(const std::string& s)
{
    if (s == "gauss3") return ErrorRule::gauss3;
    if (s == "trapezoid3") return ErrorRule::trapezoid3;
    throw InvalidArgument("unknown error rule '" + s + "' (expected gauss3 or trapezoid3)");
}

inline std::string error_rule_name(ErrorRule r) { return r == ErrorRule::gauss3 ? "gauss3" : "trapezoid3"; }

inline std::vector<QuadPoint> error_quadrature(ErrorRule r) { return r == ErrorRule::gauss3 ? gauss_cube(3) : trapezoid_cube(3); }

/// Manufactured solution with hand-derived first derivatives and body force.
struct ManufacturedCase {
    std::string name;
    ErrorRule error_rule = ErrorRule::gauss3;  ///< rule matching the reference error tables
    ComplianceField material;
    std::function<Vec3(const Vec3&)> u;
    std::function<Mat3(const Vec3&)> grad_u;  ///< (i, j) = d u_i / d x_j
    std::function<Vec3(const Vec3&)> f;       ///< div sigma

    [[nodiscard]] Mat3 sigma(const Vec3& x) const { return apply_stiffness(material(x), sym_part(grad_u(x))); }
    [[nodiscard]] Mat3 gamma(const Vec3& x) const { return skew_part(grad_u(x)); }
    /// A^{-1} gamma; the trace term vanishes on skew matrices.
    [[nodiscard]] Mat3 gamma_scaled(const Vec3& x) const { return (2.0 * material(x).mu) * gamma(x); }
};

namespace detail {

struct Example1Shape {
    double c = std::cos(std::numbers::pi / 12.0);
    double s = std::sin(std::numbers::pi / 12.0);

    [[nodiscard]] double p(const Vec3& x) const { return x[1] - c * (x[1] - 0.5) + s * (x[2] - 0.5) - 0.5; }
    [[nodiscard]] double r(const Vec3& x) const { return x[2] - s * (x[1] - 0.5) - c * (x[2] - 0.5) - 0.5; }
};

}  // namespace detail

/// Smooth rotation-type displacement on the unit cube with constant Lame parameters.
inline ManufacturedCase example1(Lame lame = {123.0, 79.3})
{
    validate_lame(lame);
    const detail::Example1Shape sh;
    ManufacturedCase mc;
    mc.name = "example1";
    mc.error_rule = ErrorRule::trapezoid3;
    mc.material = ComplianceField::constant(lame);
    mc.u = [sh](const Vec3& x) {
        const double g = std::exp(x[0]) - 1.0;
        return Vec3{0.0, -g * sh.p(x), -g * sh.r(x)};
    };
    mc.grad_u = [sh](const Vec3& x) {
        const double e = std::exp(x[0]);
        const double g = e - 1.0;
        return Mat3{{{0.0, 0.0, 0.0},
                     {-e * sh.p(x), -g * (1.0 - sh.c), -g * sh.s},
                     {-e * sh.r(x), g * sh.s, -g * (1.0 - sh.c)}}};
    };
    mc.f = [sh, lame](const Vec3& x) {
        const double e = std::exp(x[0]);
        return Vec3{-2.0 * (lame.mu + lame.lambda) * e * (1.0 - sh.c), -lame.mu * e * sh.p(x), -lame.mu * e * sh.r(x)};
    };
    return mc;
}

/// Discontinuous coefficients with contrast kappa in (0, 1/2)^3; the stress is continuous.
inline ManufacturedCase example2(double kappa = 1e6)
{
    constexpr double tp = 2.0 * std::numbers::pi;
    ManufacturedCase mc;
    mc.name = "example2";
    mc.material = ComplianceField::example2(kappa);
    auto coef = [kappa](const Vec3& x) { return in_inclusion(x) ? kappa : 1.0; };
    mc.u = [coef](const Vec3& x) {
        const double s = std::sin(tp * x[0]) * std::sin(tp * x[1]) * std::sin(tp * x[2]) / coef(x);
        return Vec3{s, s, s};
    };
    mc.grad_u = [coef](const Vec3& x) {
        const double sx = std::sin(tp * x[0]), sy = std::sin(tp * x[1]), sz = std::sin(tp * x[2]);
        const double cx = std::cos(tp * x[0]), cy = std::cos(tp * x[1]), cz = std::cos(tp * x[2]);
        const double k = 1.0 / coef(x);
        const Vec3 d{tp * cx * sy * sz * k, tp * sx * cy * sz * k, tp * sx * sy * cz * k};
        return Mat3{{d, d, d}};
    };
    mc.f = [](const Vec3& x) {
        const double sx = std::sin(tp * x[0]), sy = std::sin(tp * x[1]), sz = std::sin(tp * x[2]);
        const double cx = std::cos(tp * x[0]), cy = std::cos(tp * x[1]), cz = std::cos(tp * x[2]);
        const double q = tp * tp;
        const double s = sx * sy * sz;
        const double sxy = q * cx * cy * sz, sxz = q * cx * sy * cz, syz = q * sx * cy * cz;
        // lambda = mu on each side: f_i = lap s_i + 2 d_i div s, with s_i = S for all i
        const double lap = -3.0 * q * s;
        return Vec3{lap + 2.0 * (-q * s + sxy + sxz), lap + 2.0 * (sxy - q * s + syz), lap + 2.0 * (sxz + syz - q * s)};
    };
    return mc;
}

/// Nearly incompressible variant of the smooth case: E fixed, nu = 1/2 - 10^-exponent.
inline ManufacturedCase example3(double exponent, double young = 1e5)
{
    const double nu = 0.5 - std::pow(10.0, -exponent);
    ManufacturedCase mc = example1(lame_from_E_nu(young, nu));
    mc.name = "example3";
    return mc;
}

/// Zero Dirichlet data is a valid choice only when u vanishes on the boundary; the
/// general case uses the trace of u.
inline VectorField dirichlet_data(const ManufacturedCase& mc) { return mc.u; }

struct DerivativeCheck {
    double grad = 0.0;   ///< max relative difference of grad u vs central differences of u
    double force = 0.0;  ///< max relative difference of f vs central differences of sigma
};

/// Central-difference cross-check of the closed-form derivatives at the given points.
inline DerivativeCheck derivative_check(const ManufacturedCase& mc, const std::vector<Vec3>& points, double step = 1e-5)
{
    DerivativeCheck out;
    for (const auto& x : points) {
        const Mat3 g = mc.grad_u(x);
        double gscale = frobenius_norm(g), gdiff = 0.0;
        Vec3 fd{};
        for (int j = 0; j < 3; ++j) {
            Vec3 xp = x, xm = x;
            xp[static_cast<std::size_t>(j)] += step;
            xm[static_cast<std::size_t>(j)] -= step;
            const Vec3 du = (1.0 / (2.0 * step)) * (mc.u(xp) - mc.u(xm));
            for (std::size_t i = 0; i < 3; ++i) gdiff = std::max(gdiff, std::abs(du[i] - g[i][static_cast<std::size_t>(j)]));
            const Mat3 ds = (1.0 / (2.0 * step)) * (mc.sigma(xp) - mc.sigma(xm));
            for (std::size_t i = 0; i < 3; ++i) fd[i] += ds[i][static_cast<std::size_t>(j)];
        }
        const Vec3 f = mc.f(x);
        out.grad = std::max(out.grad, gdiff / std::max(gscale, 1e-300));
        out.force = std::max(out.force, norm(f - fd) / std::max(norm(f), 1e-300));
    }
    return out;
}

/// Relative errors of one discrete solution.
struct ErrorRow {
    double h = 0.0;
    double sigma = 0.0;
    double div = 0.0;
    double u = 0.0;
    double qu = 0.0;           ///< cell-center values of u vs u_h
    double gamma = 0.0;        ///< rotation about the x axis (scaled rotation for the scaled variant)
    double qu_average = 0.0;   ///< cell averages of u vs u_h
    double gamma_full = 0.0;   ///< all three rotation components
    std::array<double, 5> rate{};  ///< sigma, div, u, qu, gamma; NaN on the first row
};

/// Relative L2 errors; `rule` integrates sigma, div, u and gamma and their norms.
inline ErrorRow error_norms(const StructuredMesh& mesh, const AssembledSystem& sys, const SolutionFields& s,
                            const ManufacturedCase& mc, ErrorRule rule)
{
    const auto& basis = ert0_basis();
    const auto& tab = reference_tables();
    const auto quad = error_quadrature(rule);
    const auto avg_quad = gauss_cube(3);
    const std::size_t nq = quad.size();
    std::vector<std::array<Vec3, 24>> phi(nq);
    for (std::size_t q = 0; q < nq; ++q)
        for (int k = 0; k < 24; ++k) phi[q][static_cast<std::size_t>(k)] = basis.eval(k, quad[q].x);
    const bool on_vertices = vertex_rotations(s.method);
    const bool scaled = s.method == Method::msmfe1_scaled;

    // error^2, norm^2 per quantity: sigma, div, u, qu, gamma, qu_average, gamma_full
    constexpr std::size_t nterms = 7;
    std::vector<std::array<double, 2 * nterms>> acc(mesh.num_cells());
    parallel_for(0, mesh.num_cells(), [&](std::size_t c) {
        auto& a = acc[c];
        a.fill(0.0);
        const CellMap map = mesh.cell_map(c);
        const auto cf = mesh.cell_faces(c);
        const auto cv = mesh.cell_vertices(c);
        std::array<std::array<double, 3>, 24> coef{};
        for (int k = 0; k < 24; ++k)
            for (int r = 0; r < 3; ++r) {
                const std::size_t g = sys.dofs.sigma(cf[static_cast<std::size_t>(k / 4)], k % 4, r);
                coef[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] = g == npos ? 0.0 : s.sigma[g];
            }
        const Vec3 uh{s.u[sys.dofs.u(c, 0)], s.u[sys.dofs.u(c, 1)], s.u[sys.dofs.u(c, 2)]};
        Vec3 divh{};
        for (int k = 0; k < 24; ++k)
            for (std::size_t r = 0; r < 3; ++r)
                divh[r] += coef[static_cast<std::size_t>(k)][r] * reference::outward_sign(k / 4) *
                           tab.divergence[static_cast<std::size_t>(k)] / map.jacobian;
        Mat3 gamma_cell{};
        if (!on_vertices)
            for (int l = 0; l < 3; ++l) gamma_cell = gamma_cell + s.gamma[sys.dofs.gamma(c, l)] * xi(unit_vector(l));

        for (std::size_t q = 0; q < nq; ++q) {
            const Vec3 x = map.to_physical(quad[q].x);
            const double w = quad[q].w * map.jacobian;
            Mat3 sh{};
            for (int k = 0; k < 24; ++k)
                for (int r = 0; r < 3; ++r) {
                    const double cc = coef[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)];
                    if (cc == 0.0) continue;
                    sh = sh + cc * piola_row(map, k, r, phi[q][static_cast<std::size_t>(k)]);
                }
            const Mat3 se = mc.sigma(x);
            const Vec3 fe = mc.f(x);
            const Vec3 ue = mc.u(x);
            Mat3 gh = gamma_cell;
            if (on_vertices) {
                gh = Mat3{};
                for (int i = 0; i < 8; ++i) {
                    const double hv = reference::hat(i, quad[q].x);
                    for (int l = 0; l < 3; ++l)
                        gh = gh + (hv * s.gamma[sys.dofs.gamma(cv[static_cast<std::size_t>(i)], l)]) * xi(unit_vector(l));
                }
            }
            const Mat3 ge = scaled ? mc.gamma_scaled(x) : mc.gamma(x);
            const double d0 = xi_inverse(ge - gh)[0];
            const double e0 = xi_inverse(ge)[0];
            a[0] += w * contract(se - sh, se - sh);
            a[1] += w * contract(se, se);
            a[2] += w * dot(fe - divh, fe - divh);
            a[3] += w * dot(fe, fe);
            a[4] += w * dot(ue - uh, ue - uh);
            a[5] += w * dot(ue, ue);
            a[8] += w * d0 * d0;
            a[9] += w * e0 * e0;
            a[12] += w * contract(ge - gh, ge - gh);
            a[13] += w * contract(ge, ge);
        }
        const Vec3 mid = mc.u(map.to_physical({0.5, 0.5, 0.5}));
        a[6] = map.jacobian * dot(mid - uh, mid - uh);
        a[7] = map.jacobian * dot(mid, mid);
        Vec3 avg{};
        for (const auto& q : avg_quad) avg = avg + q.w * mc.u(map.to_physical(q.x));
        a[10] = map.jacobian * dot(avg - uh, avg - uh);
        a[11] = map.jacobian * dot(avg, avg);
    });
    std::array<double, 2 * nterms> tot{};
    for (const auto& a : acc)
        for (std::size_t t = 0; t < tot.size(); ++t) tot[t] += a[t];
    auto rel = [&](std::size_t t) { return tot[2 * t + 1] > 0.0 ? std::sqrt(tot[2 * t] / tot[2 * t + 1]) : std::sqrt(tot[2 * t]); };
    ErrorRow row;
    row.h = mesh.h()[0];
    row.sigma = rel(0);
    row.div = rel(1);
    row.u = rel(2);
    row.qu = rel(3);
    row.gamma = rel(4);
    row.qu_average = rel(5);
    row.gamma_full = rel(6);
    row.rate.fill(std::nan(""));
    return row;
}

inline ErrorRow error_norms(const StructuredMesh& mesh, const AssembledSystem& sys, const SolutionFields& s,
                            const ManufacturedCase& mc)
{
    return error_norms(mesh, sys, s, mc, mc.error_rule);
}

struct StudyLevel {
    int n = 0;
    ErrorRow errors;
    EquationResiduals residuals;
    SolveStats stats;
};

inline void fill_rates(std::vector<StudyLevel>& levels)
{
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const auto& p = levels[i - 1].errors;
        auto& e = levels[i].errors;
        const double ratio = std::log2(static_cast<double>(levels[i].n) / levels[i - 1].n);
        const std::array<double, 5> prev{p.sigma, p.div, p.u, p.qu, p.gamma};
        const std::array<double, 5> cur{e.sigma, e.div, e.u, e.qu, e.gamma};
        for (std::size_t k = 0; k < 5; ++k) e.rate[k] = std::log2(prev[k] / cur[k]) / ratio;
    }
}

/// Solves on the unit cube at each level n (cells per axis) and tabulates the errors.
inline std::vector<StudyLevel> convergence_study(const ManufacturedCase& mc, Method method, const std::vector<int>& levels,
                                                 const SolverOptions& opt = {}, const AssemblyOptions& aopt = {})
{
    if (levels.empty()) throw InvalidArgument("levels required");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] != 2 * levels[i - 1])
            throw InvalidArgument("levels must double: " + std::to_string(levels[i - 1]) + " then " + std::to_string(levels[i]));
    std::vector<StudyLevel> out;
    for (int n : levels) {
        try {
            const StructuredMesh mesh(DomainBox{}, {n, n, n});
            auto res = solve_problem(mesh, method, mc.material, mc.f, dirichlet_data(mc), opt, aopt);
            StudyLevel lvl;
            lvl.n = n;
            lvl.errors = error_norms(mesh, res.system, res.fields, mc);
            lvl.residuals = equation_residuals(res.system, res.fields);
            lvl.stats = res.stats;
            out.push_back(lvl);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::solver)
                throw SolverError("level n=" + std::to_string(n) + ": " + e.what());
            throw;
        }
    }
    fill_rates(out);
    return out;
}

/// Reduced-path solution against the dense saddle-point solve on the same system.
struct OracleComparison {
    double sigma = 0.0;  ///< max-norm relative differences
    double u = 0.0;
    double gamma = 0.0;
    std::size_t saddle_unknowns = 0;

    [[nodiscard]] double worst() const { return std::max({sigma, u, gamma}); }
};

inline OracleComparison oracle_compare(const StructuredMesh& mesh, Method method, const ManufacturedCase& mc,
                                       const AssemblyOptions& aopt = {}, const SolverOptions& opt = {})
{
    SolverOptions direct = opt;
    direct.kind = SolverKind::direct;
    const auto res = solve_problem(mesh, method, mc.material, mc.f, dirichlet_data(mc), direct, aopt);
    const auto ref = saddle_oracle_solve(res.system);
    OracleComparison out;
    out.sigma = relative_difference(res.fields.sigma, ref.sigma);
    out.u = relative_difference(res.fields.u, ref.u);
    out.gamma = relative_difference(res.fields.gamma, ref.gamma);
    out.saddle_unknowns = ref.sigma.size() + ref.u.size() + ref.gamma.size();
    return out;
}

}  // namespace msmfe

#endif  // MSMFE_HARNESS_HPP
