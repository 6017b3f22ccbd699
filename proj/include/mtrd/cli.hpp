#pragma once

/// Config-driven command runner behind the `mtrd` executable.
///
/// Exit codes:
///   0  every pass flag is true
///   1  a verification check failed
///   2  configuration error (unreadable file, syntax, missing or bad field)
///   3  numeric error raised by a library module
///   4  output could not be written
///   5  command-line usage error

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "mtrd/config.hpp"
#include "mtrd/constraint.hpp"
#include "mtrd/error.hpp"
#include "mtrd/report_io.hpp"
#include "mtrd/simulator.hpp"
#include "mtrd/transforms.hpp"
#include "mtrd/verifier.hpp"
#include "mtrd/wave_ode.hpp"

namespace mtrd {

enum class ExitCode : int {
    Pass = 0,
    VerificationFailed = 1,
    ConfigError = 2,
    NumericError = 3,
    IoError = 4,
    UsageError = 5,
};

struct RunOptions {
    std::string config_path;
    std::string out_dir = ".";
    unsigned long long seed = 0;
    bool quiet = false;
    /// Overrides the config's "command" field when non-empty.
    std::string command;
};

/// Files produced by a command, keyed by file name.
struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files;
    Json report;
    bool pass = true;
};

inline const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> names = {"verify", "simulate", "transform", "profile", "catalog-list"};
    return names;
}

namespace detail {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform samples inside the box spanned by a grid, with the last axis as x.
inline std::vector<Point> random_points(const Grid& grid, std::size_t count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> pts;
    pts.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        std::vector<double> c;
        for (const Axis& ax : grid.axes()) c.push_back(std::uniform_real_distribution<double>(ax.lo, ax.hi)(rng));
        Point p;
        p.x = c.back();
        c.pop_back();
        p.tau = std::move(c);
        pts.push_back(std::move(p));
    }
    return pts;
}

/// Grid used when a config gives none: the box of the default catalog grid.
inline Grid default_grid_for(const SolutionSpec& s, std::size_t m) {
    if (s.entry) return s.entry->default_grid;
    return default_catalog_grid(m, 1.0, -3.0, 3.0);
}

inline void check_grid_dimension(const Grid& g, std::size_t m, const std::string& where) {
    if (g.dimension() != m + 1) {
        throw Error(ErrorCode::ConfigError, where + ": grid has " + std::to_string(g.dimension()) +
                                                " axes but the equation needs m + 1 = " + std::to_string(m + 1));
    }
}

inline JetMethod parse_method(const ConfigNode& root) {
    const std::string method = root.string_or("method", "dual");
    if (method == "dual") return JetMethod::Dual;
    if (method == "finite_difference") return JetMethod::FiniteDifference;
    root.at("method").fail("expected 'dual' or 'finite_difference'");
}

inline Artifacts run_verify(const ConfigNode& root, const RunOptions& opt) {
    std::optional<PDESpec> pde;
    if (auto pn = root.find("pde")) pde = parse_pde(*pn);
    const std::size_t m_hint = pde ? static_cast<std::size_t>(pde->m) : 1;
    const SolutionSpec sol = parse_solution(root.at("solution"), m_hint);
    if (!pde) {
        if (!sol.entry) root.fail("missing required field 'pde' (only catalog solutions supply a default)");
        pde = sol.entry->pde;
    }
    if (sol.field.m() != static_cast<std::size_t>(pde->m)) {
        root.at("solution").fail("solution takes " + std::to_string(sol.field.m()) + " times but pde.m = " +
                                 std::to_string(pde->m));
    }
    const Grid grid = root.has("grid") ? parse_grid(root.at("grid")) : default_grid_for(sol, sol.field.m());
    check_grid_dimension(grid, static_cast<std::size_t>(pde->m), "/grid");

    ResidualOptions ropt;
    ropt.method = parse_method(root);
    ropt.fd_step = root.number_or("fd_step", 1e-5);
    const double tol =
        root.number_or("tolerance", ropt.method == JetMethod::Dual ? kJetTolerance : kFiniteDifferenceTolerance);

    Artifacts out;
    const Report report = residual_report(*pde, sol.field, grid, tol, ropt);
    out.pass = report.pass;
    out.report = Json{{"command", "verify"},
                      {"pde", to_json(*pde)},
                      {"solution", sol.description},
                      {"method", ropt.method == JetMethod::Dual ? "dual" : "finite_difference"},
                      {"report", to_json(report)}};
    if (root.has("random_points")) {
        const std::size_t n = root.at("random_points").count(1);
        const auto pts = random_points(grid, n, opt.seed);
        Report r = residual_report(*pde, sol.field, std::span<const Point>(pts), tol, grid.axes(), ropt);
        out.pass = out.pass && r.pass;
        out.report["seed"] = opt.seed;
        out.report["random_report"] = to_json(r);
    }
    out.report["pass"] = out.pass;
    return out;
}

inline Artifacts run_simulate(const ConfigNode& root, const RunOptions&) {
    std::optional<PDESpec> pde;
    if (auto pn = root.find("pde")) pde = parse_pde(*pn);
    const std::size_t m_hint = pde ? static_cast<std::size_t>(pde->m) : 1;
    const SolutionSpec sol = parse_solution(root.at("solution"), m_hint);
    if (!pde) pde = sol.entry ? sol.entry->pde : PDESpec::huxley(static_cast<int>(sol.field.m()));
    if (sol.field.m() != static_cast<std::size_t>(pde->m)) {
        root.at("solution").fail("solution takes " + std::to_string(sol.field.m()) + " times but pde.m = " +
                                 std::to_string(pde->m));
    }
    std::vector<double> omega = root.has("omega") ? root.at("omega").numbers() : std::vector<double>(sol.field.m() - 1, 0.0);
    if (omega.size() + 1 != sol.field.m()) root.at("omega").fail("needs m - 1 entries");

    RD1DProblem problem;
    problem.reduced = reduce_to_characteristic(*pde, omega);
    problem.exact = sol.field;
    problem.x_range = root.has("x_range") ? root.at("x_range").range() : std::array<double, 2>{-10.0, 10.0};
    problem.s_end = root.number_or("s_end", 1.0);

    const double dx = root.number_or("dx", 0.05);
    const double ds = root.has("ds") ? root.at("ds").number() : root.number_or("ds_factor", 0.25) * dx * dx;
    const std::string scheme_name = root.string_or("scheme", "explicit_ftcs");
    Scheme scheme;
    if (scheme_name == "explicit_ftcs") scheme = Scheme::ExplicitFtcs;
    else if (scheme_name == "crank_nicolson") scheme = Scheme::CrankNicolson;
    else root.at("scheme").fail("expected 'explicit_ftcs' or 'crank_nicolson'");
    MarchOptions mopt;
    if (root.has("stride")) mopt.stride = root.at("stride").count(1);

    const double tol = root.number_or("tolerance", 5e-3);
    const GridResult g = march(problem, dx, ds, scheme, mopt);
    const double err = g.linf_error();

    Artifacts out;
    out.pass = err <= tol;
    Json run{{"scheme", to_string(scheme)},
             {"dx", g.dx},
             {"ds", g.ds},
             {"steps", g.steps},
             {"omega", omega},
             {"x_range", problem.x_range},
             {"s_end", problem.s_end},
             {"mu", problem.reduced.mu},
             {"reaction", to_json(problem.reduced.reaction)}};
    out.report = Json{{"command", "simulate"},
                      {"pde", to_json(*pde)},
                      {"solution", sol.description},
                      {"run", run},
                      {"linf_error", err},
                      {"tolerance", tol}};
    if (root.has("front_level")) {
        const double level = root.at("front_level").number();
        const double speed = measure_front_speed(g, level);
        Json front{{"level", level}, {"speed", speed}};
        if (root.has("expected_speed")) {
            const double expected = root.at("expected_speed").number();
            const double speed_tol = root.number_or("speed_tolerance", 2e-2);
            const bool ok = std::abs(speed - expected) <= speed_tol;
            front["expected_speed"] = expected;
            front["speed_tolerance"] = speed_tol;
            front["pass"] = ok;
            out.pass = out.pass && ok;
        }
        out.report["front"] = front;
    }
    out.report["pass"] = out.pass;
    std::ostringstream csv;
    write_grid_csv(csv, g);
    out.files.emplace_back("simulation.csv", csv.str());
    return out;
}

inline Artifacts run_transform(const ConfigNode& root, const RunOptions& opt) {
    const ConfigNode tn = root.at("transform");
    const Transformation T = parse_transform(tn);
    const double tol = root.number_or("tolerance", kJetTolerance);

    Artifacts out;
    out.report = Json{{"command", "transform"}, {"transform", to_json(T)}};
    Json checks = Json::object();

    Box domain = T.domain();
    if (domain.empty()) domain.assign(T.m(), {0.0, 1.0});

    if (T.kind() == TransformKind::Characteristic) {
        const std::vector<std::string> tv = {"t1", "t2"};
        const BinaryFunction h1 = binary_from_expression(detail::parse_expression_at(tn.at("h1"), tv));
        const BinaryFunction h2 = binary_from_expression(detail::parse_expression_at(tn.at("h2"), tv));
        const Grid grid = root.has("grid") ? parse_grid(root.at("grid")) : make_grid(domain, {20, 20});
        if (grid.dimension() != 2) root.at("grid").fail("characteristic check needs a 2D (t1, t2) grid");
        const Report r = verify_transform_system(h1, h2, T, grid, tol);
        out.pass = out.pass && r.pass;
        checks["system"] = to_json(r);
    }

    if (auto expected = root.find("expected")) {
        if (expected->size() != T.m()) expected->fail("needs one expression per time variable");
        std::vector<Expression> ex;
        for (std::size_t i = 0; i < T.m(); ++i) ex.push_back(detail::parse_expression_at(expected->at(i), {"t"}));
        const double etol = root.number_or("expected_tolerance", 1e-9);
        const std::size_t samples = root.has("samples") ? root.at("samples").count(2) : 101;
        double worst = 0.0;
        for (std::size_t s = 0; s < samples; ++s) {
            Point p;
            p.x = 0.0;
            for (std::size_t i = 0; i < T.m(); ++i) {
                p.tau.push_back(domain[i][0] + (domain[i][1] - domain[i][0]) * s / (samples - 1));
            }
            const Point q = T.forward(p);
            for (std::size_t i = 0; i < T.m(); ++i) {
                const double t[1] = {p.tau[i]};
                worst = std::max(worst, std::abs(q.tau[i] - ex[i](std::span<const double>(t, 1))));
            }
        }
        const bool ok = worst <= etol;
        out.pass = out.pass && ok;
        checks["expected"] = Json{{"max_abs_error", worst}, {"tolerance", etol}, {"samples", samples}, {"pass", ok}};
    }

    if (root.has("round_trip_points")) {
        const std::size_t n = root.at("round_trip_points").count(1);
        const double rtol = root.number_or("round_trip_tolerance", 1e-9);
        std::vector<std::array<double, 2>> ranges(domain.begin(), domain.end());
        ranges.push_back({-5.0, 5.0});
        const Grid box = make_grid(ranges, std::vector<std::size_t>(ranges.size(), 2));
        double worst = 0.0;
        for (const Point& p : random_points(box, n, opt.seed)) {
            const Point back = T.inverse(T.forward(p));
            for (std::size_t i = 0; i < p.tau.size(); ++i) worst = std::max(worst, std::abs(back.tau[i] - p.tau[i]));
            worst = std::max(worst, std::abs(back.x - p.x));
        }
        const bool ok = worst <= rtol;
        out.pass = out.pass && ok;
        checks["round_trip"] = Json{{"points", n}, {"seed", opt.seed}, {"max_abs_error", worst}, {"tolerance", rtol}, {"pass", ok}};
    }

    if (root.has("solution")) {
        const PDESpec pde = parse_pde(root.at("pde"));
        if (static_cast<std::size_t>(pde.m) != T.m()) root.at("pde").fail("pde.m must match the transformation");
        const SolutionSpec sol = parse_solution(root.at("solution"), T.m());
        const ScalarField pulled = pullback_solution(T, sol.field);
        Grid grid = [&] {
            if (root.has("grid")) return parse_grid(root.at("grid"));
            std::vector<std::array<double, 2>> ranges(domain.begin(), domain.end());
            ranges.push_back({-5.0, 5.0});
            std::vector<std::size_t> counts(T.m(), T.m() == 1 ? 50 : 10);
            counts.push_back(T.m() == 1 ? 200 : 50);
            return make_grid(ranges, counts);
        }();
        check_grid_dimension(grid, T.m(), "/grid");
        const Report r = residual_report(pde, pulled, grid, tol);
        out.pass = out.pass && r.pass;
        checks["pullback"] = Json{{"pde", to_json(pde)}, {"solution", sol.description}, {"report", to_json(r)}};
    }

    if (checks.empty()) root.fail("nothing to check: give 'expected', 'round_trip_points', 'solution' or a characteristic transform");
    out.report["checks"] = checks;
    out.report["pass"] = out.pass;
    return out;
}

inline Artifacts run_profile(const ConfigNode& root, const RunOptions&) {
    const std::string mode = root.string_or("mode", "integrate");
    Artifacts out;
    Profile profile;
    if (mode == "integrate") {
        const WaveProblem w = parse_wave_problem(root.at("wave"));
        const auto range = root.at("y_range").range();
        std::optional<double> start;
        if (root.has("y_start")) start = root.at("y_start").number();
        const double step = root.number_or("step", 1e-2);
        profile = integrate_profile(w, root.at("u0").number(), root.at("du0").number(), range, step, start);
        out.pass = !profile.blew_up;
        out.report = Json{{"command", "profile"},
                          {"mode", mode},
                          {"wave", Json{{"mu", w.mu}, {"k", w.k}, {"reaction", to_json(w.reaction)}}},
                          {"y_range", range},
                          {"step", step},
                          {"samples", profile.size()},
                          {"blew_up", profile.blew_up},
                          {"ode_residual", profile_residual(w, profile)}};
        if (auto ref = root.find("reference")) {
            const Expression e = detail::parse_expression_at(*ref, {"y"});
            const double tol = root.number_or("tolerance", 1e-6);
            double worst = 0.0;
            for (std::size_t i = 0; i < profile.size(); ++i) {
                const double y[1] = {profile.y[i]};
                worst = std::max(worst, std::abs(profile.u[i] - e(std::span<const double>(y, 1))));
            }
            const bool ok = worst <= tol;
            out.pass = out.pass && ok;
            out.report["reference"] = Json{{"expression", e.text()}, {"max_abs_error", worst}, {"tolerance", tol}, {"pass", ok}};
        }
    } else if (mode == "shoot") {
        const ConfigNode wn = root.at("wave");
        const double mu = wn.number_or("mu", 1.0);
        const ReactionTerm f = wn.has("reaction") ? parse_reaction(wn.at("reaction")) : ReactionTerm::huxley_normalized();
        ShootOptions so;
        so.step = root.number_or("step", so.step);
        const ShootResult r = front_shoot(mu, f, root.at("u_minus").number(), root.at("u_plus").number(),
                                          root.at("bracket").range(), so);
        profile = r.profile;
        out.report = Json{{"command", "profile"},
                          {"mode", mode},
                          {"wave", Json{{"mu", mu}, {"reaction", to_json(f)}}},
                          {"speed", r.speed},
                          {"landing_error", r.landing_error},
                          {"bisections", r.bisections},
                          {"samples", profile.size()}};
        if (root.has("expected_speed")) {
            const double expected = root.at("expected_speed").number();
            const double tol = root.number_or("speed_tolerance", 1e-3);
            const bool ok = std::abs(r.speed - expected) <= tol;
            out.pass = ok;
            out.report["expected_speed"] = expected;
            out.report["speed_tolerance"] = tol;
        }
    } else {
        root.at("mode").fail("expected 'integrate' or 'shoot'");
    }
    out.report["pass"] = out.pass;
    std::ostringstream csv;
    write_profile_csv(csv, profile);
    out.files.emplace_back("profile.csv", csv.str());
    return out;
}

inline std::string catalog_listing() {
    std::string s;
    for (CatalogId id : kCatalogIds) {
        s += std::string(to_string(id)) + "  " + std::string(catalog_schema(id)) + "\n";
    }
    return s;
}

inline ExitCode exit_code_for(const Error& e) {
    return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ParseError ? ExitCode::ConfigError
                                                                                   : ExitCode::NumericError;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw OutputError("cannot open '" + path.string() + "' for writing");
    f << content;
    f.close();
    if (!f) throw OutputError("failed writing '" + path.string() + "'");
}

inline void write_artifacts(const RunOptions& opt, const Artifacts& a) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw OutputError("cannot create output directory '" + opt.out_dir + "': " + ec.message());
    write_file(std::filesystem::path(opt.out_dir) / "report.json", to_fixed_json(a.report));
    for (const auto& [name, content] : a.files) write_file(std::filesystem::path(opt.out_dir) / name, content);
}

inline void print_summary(std::ostream& os, const Json& report) {
    auto print_report = [&os](const char* label, const Json& r) {
        Report rep;
        rep.subject = r.at("subject").get<std::string>();
        rep.points_evaluated = r.at("points_evaluated").get<std::size_t>();
        rep.points_masked = r.at("points_masked").get<std::size_t>();
        rep.max_abs_residual = r.at("max_abs_residual").get<double>();
        rep.rms_residual = r.at("rms_residual").get<double>();
        rep.tolerance = r.at("tolerance").get<double>();
        rep.pass = r.at("pass").get<bool>();
        os << "[" << label << "]\n" << render_report(rep);
    };
    if (report.contains("report")) print_report("grid", report.at("report"));
    if (report.contains("random_report")) print_report("random points", report.at("random_report"));
    if (report.contains("checks")) {
        for (auto it = report.at("checks").begin(); it != report.at("checks").end(); ++it) {
            if (it.value().contains("report")) print_report(it.key().c_str(), it.value().at("report"));
            else if (it.value().contains("subject")) print_report(it.key().c_str(), it.value());
            else os << "[" << it.key() << "]\nmax |error|           : "
                    << format_double(it.value().at("max_abs_error").get<double>()) << "\n";
        }
    }
    for (const char* key : {"linf_error", "speed", "landing_error", "ode_residual"}) {
        if (report.contains(key)) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%-22s: ", key);
            os << buf << format_double(report.at(key).get<double>()) << "\n";
        }
    }
    if (report.contains("front")) os << "front speed           : " << format_double(report.at("front").at("speed").get<double>()) << "\n";
    os << "overall               : " << (report.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
}

}  // namespace detail

/// Runs one command from a parsed config. Never throws.
inline ExitCode run_config(const nlohmann::json& config, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    std::string command = opt.command;
    Artifacts art;
    try {
        const ConfigNode root(config, "");
        if (command.empty()) command = root.at("command").string();
        if (std::find(known_commands().begin(), known_commands().end(), command) == known_commands().end()) {
            if (root.has("command")) root.at("command").fail("unknown command '" + command + "'");
            throw Error(ErrorCode::ConfigError, "unknown command '" + command + "'");
        }
        if (command == "catalog-list") {
            out << detail::catalog_listing();
            return ExitCode::Pass;
        }
        if (!config.is_object()) root.fail("expected an object");
        if (command == "verify") art = detail::run_verify(root, opt);
        else if (command == "simulate") art = detail::run_simulate(root, opt);
        else if (command == "transform") art = detail::run_transform(root, opt);
        else art = detail::run_profile(root, opt);
    } catch (const Error& e) {
        const ExitCode code = detail::exit_code_for(e);
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        Json report{{"command", command},
                    {"pass", false},
                    {"error", Json{{"code", to_string(e.code())}, {"exit_status", static_cast<int>(code)}, {"message", e.what()}}}};
        try {
            detail::write_artifacts(opt, Artifacts{{}, report, false});
        } catch (const detail::OutputError&) {
        }
        return code;
    }
    try {
        detail::write_artifacts(opt, art);
    } catch (const detail::OutputError& e) {
        err << "error [IoError]: " << e.what() << "\n";
        return ExitCode::IoError;
    }
    if (!opt.quiet) detail::print_summary(out, art.report);
    return art.pass ? ExitCode::Pass : ExitCode::VerificationFailed;
}

/// Loads opt.config_path (optional for catalog-list) and runs it.
inline ExitCode run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    nlohmann::json config = nlohmann::json::object();
    if (!opt.config_path.empty()) {
        try {
            config = load_config_file(opt.config_path);
        } catch (const Error& e) {
            err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
            return ExitCode::ConfigError;
        }
    } else if (opt.command != "catalog-list") {
        err << "error [ConfigError]: --config is required for '" << (opt.command.empty() ? "run" : opt.command) << "'\n";
        return ExitCode::ConfigError;
    }
    return run_config(config, opt, out, err);
}

}  // namespace mtrd
