// Command line front end: solve, study, verify, oracle.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "msmfe/msmfe.hpp"

namespace {

using namespace msmfe;

constexpr double invariant_tol = 1e-10;
constexpr double oracle_tol = 1e-8;

struct Overrides {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> settings;
};

/// Registers an option that records "key=value" in command line order.
void add_setting(CLI::App& app, Overrides& ov, const std::string& flag, const std::string& key, const std::string& help)
{
    app.add_option_function<std::string>(
           "--" + flag, [&ov, key](const std::string& v) { ov.settings.emplace_back(key, v); }, help)
        ->type_name("VALUE");
}

void add_switch(CLI::App& app, Overrides& ov, const std::string& flag, const std::string& key, const std::string& help)
{
    app.add_flag_callback("--" + flag, [&ov, key] { ov.settings.emplace_back(key, "true"); }, help);
}

RunConfig build_config(const Overrides& ov)
{
    RunConfig cfg;
    if (!ov.config_path.empty()) cfg = load_config(ov.config_path);
    for (const auto& [k, v] : ov.settings) {
        try {
            apply_setting(cfg, k, v);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("command line: ") + e.what());
        }
    }
    return cfg;
}

std::string output_path(const RunConfig& cfg, const std::string& name) { return cfg.output_dir + "/" + name; }

std::string run_tag(const RunConfig& cfg) { return "ex" + example_name(cfg.example) + "_" + method_name(cfg.resolved_method()); }

void print_errors(const ErrorRow& e)
{
    std::printf("  sigma %s  div %s  u %s  Qu %s  gamma %s\n", format_error(e.sigma).c_str(), format_error(e.div).c_str(),
                format_error(e.u).c_str(), format_error(e.qu).c_str(), format_error(e.gamma).c_str());
}

void require_invariants(const EquationResiduals& r, int n)
{
    if (r.conservation > invariant_tol || r.symmetry > invariant_tol)
        throw Error(ErrorCategory::verification, "level n=" + std::to_string(n) + ": conservation residual " +
                                                     std::to_string(r.conservation) + ", symmetry residual " +
                                                     std::to_string(r.symmetry) + " exceed 1e-10");
}

int cmd_solve(const RunConfig& cfg)
{
    validate_config(cfg);
    if (cfg.levels.size() != 1) throw ConfigError("solve takes exactly one level");
    const int n = cfg.levels.front();
    const Method method = cfg.resolved_method();
    const ManufacturedCase mc = make_case(cfg);
    const StructuredMesh mesh(DomainBox{}, {n, n, n});
    const auto res = solve_problem(mesh, method, mc.material, mc.f, dirichlet_data(mc), cfg.solver, cfg.assembly);
    const auto err = error_norms(mesh, res.system, res.fields, mc);
    const auto resid = equation_residuals(res.system, res.fields);
    std::printf("%s example=%s n=%d reduced unknowns=%zu nonzeros=%zu\n", method_name(method).c_str(),
                example_name(cfg.example).c_str(), n, res.stats.reduced_unknowns, res.stats.reduced_nonzeros);
    std::printf("  solver %s iterations=%zu relative residual=%.2e time=%.2fs\n", res.stats.solver.method.c_str(),
                res.stats.solver.iterations, res.stats.solver.relative_residual, res.stats.solver.seconds);
    print_errors(err);
    std::printf("  residuals: stress %.2e conservation %.2e symmetry %.2e\n", resid.stress, resid.conservation,
                resid.symmetry);
    if (cfg.emit_vtk) {
        const std::string path = output_path(cfg, "solution_" + run_tag(cfg) + "_n" + std::to_string(n) + ".vtk");
        write_vtk(mesh, path, &res.system, &res.fields);
        std::printf("  wrote %s\n", path.c_str());
    }
    if (cfg.emit_csv) {
        StudyLevel lvl{n, err, resid, res.stats};
        const std::string path = output_path(cfg, "solve_" + run_tag(cfg) + "_n" + std::to_string(n) + ".csv");
        write_csv({lvl}, path);
        std::printf("  wrote %s\n", path.c_str());
    }
    if (cfg.check_oracle) {
        const auto cmp = oracle_compare(mesh, method, mc, cfg.assembly, cfg.solver);
        std::printf("  oracle: sigma %.2e u %.2e gamma %.2e\n", cmp.sigma, cmp.u, cmp.gamma);
        if (cmp.worst() > oracle_tol) throw Error(ErrorCategory::verification, "reduced solution differs from the saddle solve");
    }
    require_invariants(resid, n);
    return 0;
}

int cmd_study(const RunConfig& cfg)
{
    validate_config(cfg);
    const Method method = cfg.resolved_method();
    const ManufacturedCase mc = make_case(cfg);
    const auto levels = convergence_study(mc, method, cfg.levels, cfg.solver, cfg.assembly);
    const std::string table = format_csv(levels);
    std::fputs(table.c_str(), stdout);
    if (cfg.emit_csv) {
        const std::string path = output_path(cfg, "study_" + run_tag(cfg) + ".csv");
        write_text(path, table);
        std::fprintf(stderr, "wrote %s\n", path.c_str());
    }
    for (const auto& l : levels) require_invariants(l.residuals, l.n);
    return 0;
}

int cmd_verify()
{
    bool ok = true;
    for (const auto& c : reference_element_suite()) {
        const char* status = c.passed ? "ok" : (c.required ? "FAIL" : "note");
        std::printf("%-4s %-52s %.3e (threshold %.1e)\n", status, c.name.c_str(), c.value, c.threshold);
        ok = ok && (c.passed || !c.required);
    }
    const std::vector<Vec3> pts{{0.13, 0.41, 0.77}, {0.62, 0.28, 0.35}, {0.81, 0.66, 0.12}, {0.3, 0.9, 0.55}};
    const std::vector<ManufacturedCase> cases{example1(), example2(), example3(9.0)};
    for (const auto& mc : cases) {
        const auto d = derivative_check(mc, pts);
        const bool pass = d.grad < 1e-6 && d.force < 1e-6;
        std::printf("%-4s %-52s grad %.1e force %.1e\n", pass ? "ok" : "FAIL", ("derivative oracle " + mc.name).c_str(), d.grad,
                    d.force);
        ok = ok && pass;
    }
    if (!ok) throw Error(ErrorCategory::verification, "reference-element verification failed");
    return 0;
}

int cmd_oracle(RunConfig cfg, bool method_given)
{
    if (cfg.levels.empty()) cfg.levels = {2, 4};
    validate_config(cfg);
    const ManufacturedCase mc = make_case(cfg);
    std::vector<Method> methods{Method::msmfe0, Method::msmfe1, Method::msmfe1_scaled};
    if (method_given) methods = {cfg.resolved_method()};
    bool ok = true;
    for (int n : cfg.levels) {
        if (n > 4) throw ConfigError("oracle is limited to grids of at most 4^3 cells");
        const StructuredMesh mesh(DomainBox{}, {n, n, n});
        for (Method m : methods) {
            const auto cmp = oracle_compare(mesh, m, mc, cfg.assembly, cfg.solver);
            const bool pass = cmp.worst() <= oracle_tol;
            std::printf("%-4s n=%d %-14s saddle unknowns %5zu  sigma %.2e  u %.2e  gamma %.2e\n", pass ? "ok" : "FAIL", n,
                        method_name(m).c_str(), cmp.saddle_unknowns, cmp.sigma, cmp.u, cmp.gamma);
            ok = ok && pass;
        }
    }
    if (!ok) throw Error(ErrorCategory::verification, "reduced and saddle-point solutions differ");
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multipoint stress mixed finite elements for linear elasticity on cuboid grids"};
    app.require_subcommand(1);
    Overrides ov;
    app.add_option("--config", ov.config_path, "key=value configuration file; flags override it")->type_name("FILE");
    add_setting(app, ov, "method", "method", "msmfe0, msmfe1 or msmfe1-scaled");
    add_setting(app, ov, "example", "example", "1, 2, 3 or custom");
    add_setting(app, ov, "levels", "levels", "comma separated cells per axis, e.g. 2,4,8,16");
    add_setting(app, ov, "lambda", "lambda", "Lame lambda (examples 1 and custom)");
    add_setting(app, ov, "mu", "mu", "Lame mu (examples 1 and custom)");
    add_setting(app, ov, "E", "E", "Young's modulus (examples 3 and custom)");
    add_setting(app, ov, "nu-exponent", "nu_exponent", "k in nu = 1/2 - 10^-k (examples 3 and custom)");
    add_setting(app, ov, "kappa", "kappa", "coefficient contrast (example 2)");
    add_setting(app, ov, "solver", "solver", "auto, cg, pcg or direct");
    add_setting(app, ov, "tol", "tol", "relative residual tolerance of the iterative solvers");
    add_setting(app, ov, "maxit", "maxit", "iteration cap, 0 for automatic");
    add_setting(app, ov, "output-dir", "output_dir", "directory for CSV and VTK output");
    add_setting(app, ov, "rotation-form", "rotation_form", "MSMFE-0 stress-rotation rule: vertex or exact");
    add_setting(app, ov, "dirichlet-rule", "dirichlet_rule", "boundary term rule: midpoint or gauss3");
    add_setting(app, ov, "load-rule", "load_rule", "body force rule: vertex or gauss3");
    add_setting(app, ov, "error-rule", "error_rule", "error integration rule: gauss3 or trapezoid3");
    add_switch(app, ov, "emit-vtk", "emit_vtk", "write VTK fields (solve)");
    add_switch(app, ov, "emit-csv", "emit_csv", "write the CSV table");
    add_switch(app, ov, "check-oracle", "check_oracle", "compare against the saddle-point solve (solve)");

    auto* solve = app.add_subcommand("solve", "solve one level and report errors");
    auto* study = app.add_subcommand("study", "convergence table over the levels");
    auto* verify = app.add_subcommand("verify", "reference-element property suite");
    auto* oracle = app.add_subcommand("oracle", "reduced path against the saddle-point solve on grids up to 4^3");
    for (auto* s : {solve, study, verify, oracle}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorCategory::validation);
    }

    try {
        const RunConfig cfg = build_config(ov);
        if (solve->parsed()) return cmd_solve(cfg);
        if (study->parsed()) return cmd_study(cfg);
        if (verify->parsed()) return cmd_verify();
        bool method_given = cfg.method.has_value();
        return cmd_oracle(cfg, method_given);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return static_cast<int>(ErrorCategory::validation);
    }
}
