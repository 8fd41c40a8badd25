#ifndef MSMFE_IO_HPP
#define MSMFE_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "msmfe/assembly.hpp"
#include "msmfe/errors.hpp"
#include "msmfe/harness.hpp"
#include "msmfe/linsolve.hpp"
#include "msmfe/mesh.hpp"
#include "msmfe/reduction.hpp"

namespace msmfe {

enum class ExampleKind { example1, example2, example3, custom };

inline std::string example_name(ExampleKind e)
{
    switch (e) {
        case ExampleKind::example1: return "1";
        case ExampleKind::example2: return "2";
        case ExampleKind::example3: return "3";
        case ExampleKind::custom: return "custom";
    }
    return "?";
}

inline ExampleKind parse_example(const std::string& s)
{
    if (s == "1") return ExampleKind::example1;
    if (s == "2") return ExampleKind::example2;
    if (s == "3") return ExampleKind::example3;
    if (s == "custom") return ExampleKind::custom;
    throw InvalidArgument("unknown example '" + s + "' (expected 1, 2, 3 or custom)");
}

/// Validated experiment configuration. Unset optionals take example-dependent defaults.
struct RunConfig {
    std::optional<Method> method;  ///< default msmfe1 for example 3, msmfe0 otherwise
    ExampleKind example = ExampleKind::example1;
    std::vector<int> levels;
    std::optional<double> lambda;
    std::optional<double> mu;
    std::optional<double> young;
    std::optional<double> nu_exponent;
    std::optional<double> kappa;
    SolverOptions solver;
    AssemblyOptions assembly;
    std::optional<ErrorRule> error_rule;  ///< default: the case's rule
    std::string output_dir = ".";
    bool emit_vtk = false;
    bool emit_csv = false;
    bool check_oracle = false;

    bool operator==(const RunConfig&) const = default;

    [[nodiscard]] Method resolved_method() const
    {
        if (method) return *method;
        return example == ExampleKind::example3 ? Method::msmfe1 : Method::msmfe0;
    }
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v)
{
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(x))
        throw InvalidArgument("invalid number '" + v + "' for key '" + key + "'");
    return x;
}

inline long parse_long(const std::string& key, const std::string& v)
{
    long x = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end) throw InvalidArgument("invalid integer '" + v + "' for key '" + key + "'");
    return x;
}

inline bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InvalidArgument("invalid boolean '" + v + "' for key '" + key + "'");
}

inline std::vector<int> parse_levels(const std::string& key, const std::string& v)
{
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw InvalidArgument("empty entry in '" + key + "'");
        const long n = parse_long(key, item);
        if (n < 1 || n > 4096) throw InvalidArgument("level " + item + " out of range [1, 4096]");
        out.push_back(static_cast<int>(n));
    }
    return out;
}

inline std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

/// Recognized configuration keys; CLI flags use the same names with '-' for '_'.
inline const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> k{
        "method",         "example",       "levels",    "lambda",       "mu",         "E",
        "nu_exponent",    "kappa",         "solver",    "tol",          "maxit",      "output_dir",
        "emit_vtk",       "emit_csv",      "check_oracle", "rotation_form", "dirichlet_rule", "load_rule",
        "error_rule",
    };
    return k;
}

/// Sets one key; throws InvalidArgument with the key name on an unknown key or bad value.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& raw)
{
    const std::string v = detail::trim(raw);
    if (v.empty()) throw InvalidArgument("empty value for key '" + key + "'");
    if (key == "method") c.method = parse_method(v);
    else if (key == "example") c.example = parse_example(v);
    else if (key == "levels") c.levels = detail::parse_levels(key, v);
    else if (key == "lambda") c.lambda = detail::parse_double(key, v);
    else if (key == "mu") c.mu = detail::parse_double(key, v);
    else if (key == "E") c.young = detail::parse_double(key, v);
    else if (key == "nu_exponent") c.nu_exponent = detail::parse_double(key, v);
    else if (key == "kappa") c.kappa = detail::parse_double(key, v);
    else if (key == "solver") c.solver.kind = parse_solver(v);
    else if (key == "tol") c.solver.tol = detail::parse_double(key, v);
    else if (key == "maxit") {
        const long m = detail::parse_long(key, v);
        if (m < 0) throw InvalidArgument("maxit must be non-negative");
        c.solver.maxit = static_cast<std::size_t>(m);
    } else if (key == "output_dir") c.output_dir = v;
    else if (key == "emit_vtk") c.emit_vtk = detail::parse_bool(key, v);
    else if (key == "emit_csv") c.emit_csv = detail::parse_bool(key, v);
    else if (key == "check_oracle") c.check_oracle = detail::parse_bool(key, v);
    else if (key == "rotation_form") c.assembly.rotation_form = parse_rotation_form(v);
    else if (key == "dirichlet_rule") c.assembly.dirichlet_rule = parse_dirichlet_rule(v);
    else if (key == "load_rule") c.assembly.load_rule = parse_load_rule(v);
    else if (key == "error_rule") c.error_rule = parse_error_rule(v);
    else throw InvalidArgument("unknown key '" + key + "'");
}

/// Parses flat key=value text. '#' starts a comment; blank lines are ignored; a key may
/// appear once. Errors are ConfigError with "<source>:<line>: ...".
inline RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>",
                                   RunConfig base = {})
{
    std::stringstream ss(text);
    std::string line;
    std::map<std::string, int> seen;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key=value, got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(where + "missing key");
        if (const auto it = seen.find(key); it != seen.end())
            throw ConfigError(where + "duplicate key '" + key + "' (first on line " + std::to_string(it->second) + ")");
        seen[key] = lineno;
        try {
            apply_setting(base, key, line.substr(eq + 1));
        } catch (const InvalidArgument& e) {
            throw ConfigError(where + e.what());
        }
    }
    return base;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {})
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path, std::move(base));
}

/// Text form that parses back to an equal configuration.
inline std::string serialize_config(const RunConfig& c)
{
    std::ostringstream o;
    if (c.method) o << "method=" << method_name(*c.method) << '\n';
    o << "example=" << example_name(c.example) << '\n';
    if (!c.levels.empty()) {
        o << "levels=";
        for (std::size_t i = 0; i < c.levels.size(); ++i) o << (i ? "," : "") << c.levels[i];
        o << '\n';
    }
    auto opt = [&](const char* key, const std::optional<double>& v) {
        if (v) o << key << '=' << detail::format_double(*v) << '\n';
    };
    opt("lambda", c.lambda);
    opt("mu", c.mu);
    opt("E", c.young);
    opt("nu_exponent", c.nu_exponent);
    opt("kappa", c.kappa);
    o << "solver=" << solver_name(c.solver.kind) << '\n';
    o << "tol=" << detail::format_double(c.solver.tol) << '\n';
    o << "maxit=" << c.solver.maxit << '\n';
    o << "output_dir=" << c.output_dir << '\n';
    o << "emit_vtk=" << (c.emit_vtk ? "true" : "false") << '\n';
    o << "emit_csv=" << (c.emit_csv ? "true" : "false") << '\n';
    o << "check_oracle=" << (c.check_oracle ? "true" : "false") << '\n';
    o << "rotation_form=" << rotation_form_name(c.assembly.rotation_form) << '\n';
    o << "dirichlet_rule=" << dirichlet_rule_name(c.assembly.dirichlet_rule) << '\n';
    o << "load_rule=" << load_rule_name(c.assembly.load_rule) << '\n';
    if (c.error_rule) o << "error_rule=" << error_rule_name(*c.error_rule) << '\n';
    return o.str();
}

/// Semantic checks; throws ConfigError.
inline void validate_config(const RunConfig& c)
{
    if (c.levels.empty()) throw ConfigError("levels required");
    for (std::size_t i = 1; i < c.levels.size(); ++i)
        if (c.levels[i] <= c.levels[i - 1]) throw ConfigError("levels must be strictly increasing");
    if (!(c.solver.tol > 0.0) || c.solver.tol >= 1.0) throw ConfigError("tol must lie in (0, 1)");
    const bool lame = c.lambda || c.mu;
    const bool enu = c.young || c.nu_exponent;
    switch (c.example) {
        case ExampleKind::example1:
            if (enu || c.kappa) throw ConfigError("example 1 accepts only lambda and mu overrides");
            break;
        case ExampleKind::example2:
            if (lame || enu) throw ConfigError("example 2 accepts only the kappa override");
            if (c.kappa && !(*c.kappa > 0.0)) throw ConfigError("kappa must be positive");
            break;
        case ExampleKind::example3:
            if (lame || c.kappa) throw ConfigError("example 3 accepts only E and nu_exponent overrides");
            break;
        case ExampleKind::custom:
            if (c.kappa) throw ConfigError("custom example does not use kappa");
            if (lame == enu) throw ConfigError("custom example needs either lambda and mu or E and nu_exponent");
            if (lame && !(c.lambda && c.mu)) throw ConfigError("custom example needs both lambda and mu");
            if (enu && !(c.young && c.nu_exponent)) throw ConfigError("custom example needs both E and nu_exponent");
            break;
    }
    if (c.nu_exponent && !(*c.nu_exponent > 0.0 && *c.nu_exponent <= 15.0))
        throw ConfigError("nu_exponent must lie in (0, 15]");
}

/// Manufactured case described by a validated configuration.
inline ManufacturedCase make_case(const RunConfig& c)
{
    ManufacturedCase mc;
    try {
        switch (c.example) {
            case ExampleKind::example1: mc = example1({c.lambda.value_or(123.0), c.mu.value_or(79.3)}); break;
            case ExampleKind::example2: mc = example2(c.kappa.value_or(1e6)); break;
            case ExampleKind::example3: mc = example3(c.nu_exponent.value_or(5.0), c.young.value_or(1e5)); break;
            case ExampleKind::custom:
                if (c.lambda) mc = example1({*c.lambda, *c.mu});
                else mc = example3(*c.nu_exponent, *c.young);
                mc.name = "custom";
                break;
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (c.error_rule) mc.error_rule = *c.error_rule;
    return mc;
}

// ---------------------------------------------------------------------------
// CSV tables.
// ---------------------------------------------------------------------------

inline std::string format_error(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3E", x);
    return buf;
}

inline std::string format_rate(double x)
{
    if (std::isnan(x)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

/// One row per level: h, then error and rate for sigma, div sigma, u, Q u and gamma.
inline std::string format_csv(const std::vector<StudyLevel>& levels)
{
    std::string s = "h,sigma_error,sigma_rate,div_error,div_rate,u_error,u_rate,qu_error,qu_rate,gamma_error,gamma_rate\n";
    for (const auto& l : levels) {
        const auto& e = l.errors;
        const std::array<double, 5> err{e.sigma, e.div, e.u, e.qu, e.gamma};
        s += "1/" + std::to_string(l.n);
        for (std::size_t k = 0; k < 5; ++k) s += "," + format_error(err[k]) + "," + format_rate(e.rate[k]);
        s += '\n';
    }
    return s;
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::error_code ec;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline void write_csv(const std::vector<StudyLevel>& levels, const std::string& path) { write_text(path, format_csv(levels)); }

// ---------------------------------------------------------------------------
// VTK legacy export.
// ---------------------------------------------------------------------------

/// Cell averages of the three stress rows.
inline std::vector<Mat3> cell_average_stress(const StructuredMesh& mesh, const AssembledSystem& sys, const SolutionFields& s)
{
    const auto& tab = reference_tables();
    std::vector<Mat3> out(mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const CellMap map = mesh.cell_map(c);
        const auto cf = mesh.cell_faces(c);
        Mat3 m{};
        for (int k = 0; k < 24; ++k)
            for (int r = 0; r < 3; ++r) {
                const std::size_t g = sys.dofs.sigma(cf[static_cast<std::size_t>(k / 4)], k % 4, r);
                if (g != npos) m = m + s.sigma[g] * piola_row(map, k, r, tab.integral[static_cast<std::size_t>(k)]);
            }
        out[c] = m;
    }
    return out;
}

/// ASCII rectilinear grid. With `sys` and `fields` null only the geometry is written.
inline std::string format_vtk(const StructuredMesh& mesh, const AssembledSystem* sys = nullptr,
                              const SolutionFields* fields = nullptr)
{
    std::ostringstream o;
    o.precision(10);
    o << "# vtk DataFile Version 3.0\nmsmfe solution\nASCII\nDATASET RECTILINEAR_GRID\n";
    const auto n = mesh.n();
    o << "DIMENSIONS " << n[0] + 1 << ' ' << n[1] + 1 << ' ' << n[2] + 1 << '\n';
    const char* names[3] = {"X_COORDINATES", "Y_COORDINATES", "Z_COORDINATES"};
    for (std::size_t a = 0; a < 3; ++a) {
        o << names[a] << ' ' << n[a] + 1 << " double\n";
        for (int i = 0; i <= n[a]; ++i) {
            std::array<std::size_t, 3> ijk{0, 0, 0};
            ijk[a] = static_cast<std::size_t>(i);
            o << (i ? " " : "") << mesh.vertex_point(mesh.vertex_index(ijk[0], ijk[1], ijk[2]))[a];
        }
        o << '\n';
    }
    if (sys == nullptr || fields == nullptr) return o.str();
    const std::size_t nc = mesh.num_cells();
    o << "CELL_DATA " << nc << '\n';
    auto vec = [&](const char* name, auto&& get, std::size_t count) {
        o << "VECTORS " << name << " double\n";
        for (std::size_t i = 0; i < count; ++i) {
            const Vec3 v = get(i);
            o << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
        }
    };
    vec("displacement", [&](std::size_t c) { return Vec3{fields->u[3 * c], fields->u[3 * c + 1], fields->u[3 * c + 2]}; }, nc);
    const bool on_vertices = vertex_rotations(fields->method);
    const char* rot = fields->method == Method::msmfe1_scaled ? "scaled_rotation" : "rotation";
    auto gamma_at = [&](std::size_t e) { return Vec3{fields->gamma[3 * e], fields->gamma[3 * e + 1], fields->gamma[3 * e + 2]}; };
    if (!on_vertices) vec(rot, gamma_at, nc);
    const auto avg = cell_average_stress(mesh, *sys, *fields);
    const char* rows[3] = {"stress_row_0", "stress_row_1", "stress_row_2"};
    for (std::size_t r = 0; r < 3; ++r) vec(rows[r], [&](std::size_t c) { return avg[c][r]; }, nc);
    if (on_vertices) {
        o << "POINT_DATA " << mesh.num_vertices() << '\n';
        vec(rot, gamma_at, mesh.num_vertices());
    }
    return o.str();
}

inline void write_vtk(const StructuredMesh& mesh, const std::string& path, const AssembledSystem* sys = nullptr,
                      const SolutionFields* fields = nullptr)
{
    write_text(path, format_vtk(mesh, sys, fields));
}

}  // namespace msmfe

#endif  // MSMFE_IO_HPP
