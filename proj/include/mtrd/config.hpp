#pragma once

/// Builds library objects from JSON run documents. Every failure is a
/// ConfigError naming the offending field path, e.g. "/pde/mu".

#include <array>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mtrd/arbitrary_function.hpp"
#include "mtrd/constraint.hpp"
#include "mtrd/error.hpp"
#include "mtrd/expression.hpp"
#include "mtrd/field.hpp"
#include "mtrd/grid.hpp"
#include "mtrd/pde.hpp"
#include "mtrd/transforms.hpp"
#include "mtrd/wave_ode.hpp"

namespace mtrd {

/// A JSON value together with its path from the document root.
class ConfigNode {
public:
    ConfigNode(const nlohmann::json& value, std::string path) : value_(&value), path_(std::move(path)) {}

    const nlohmann::json& json() const { return *value_; }
    const std::string& path() const { return path_; }
    std::string where() const { return path_.empty() ? "/" : path_; }

    [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorCode::ConfigError, where() + ": " + msg); }

    bool has(const std::string& key) const { return value_->is_object() && value_->contains(key); }

    ConfigNode at(const std::string& key) const {
        if (!value_->is_object()) fail("expected an object");
        auto it = value_->find(key);
        if (it == value_->end()) fail("missing required field '" + key + "'");
        return ConfigNode(*it, path_ + "/" + key);
    }
    ConfigNode at(std::size_t i) const {
        if (!value_->is_array() || i >= value_->size()) fail("index " + std::to_string(i) + " out of range");
        return ConfigNode((*value_)[i], path_ + "/" + std::to_string(i));
    }
    std::optional<ConfigNode> find(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return at(key);
    }

    std::size_t size() const {
        if (!value_->is_array()) fail("expected an array");
        return value_->size();
    }

    double number() const {
        if (!value_->is_number()) fail("expected a number");
        return value_->get<double>();
    }
    long long integer() const {
        if (!value_->is_number_integer()) fail("expected an integer");
        return value_->get<long long>();
    }
    std::size_t count(long long min_value = 0) const {
        const long long v = integer();
        if (v < min_value) fail("must be >= " + std::to_string(min_value));
        return static_cast<std::size_t>(v);
    }
    std::string string() const {
        if (!value_->is_string()) fail("expected a string");
        return value_->get<std::string>();
    }
    bool boolean() const {
        if (!value_->is_boolean()) fail("expected true or false");
        return value_->get<bool>();
    }
    std::vector<double> numbers() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).number());
        return out;
    }
    std::array<double, 2> range() const {
        if (size() != 2) fail("expected [lo, hi]");
        return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
    }

    double number_or(const std::string& key, double fallback) const { return has(key) ? at(key).number() : fallback; }
    std::string string_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? at(key).string() : fallback;
    }
    bool boolean_or(const std::string& key, bool fallback) const { return has(key) ? at(key).boolean() : fallback; }

private:
    const nlohmann::json* value_;
    std::string path_;
};

/// Parses a config document; syntax errors report line and column.
inline nlohmann::json parse_config_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, std::string("syntax error: ") + e.what());
    }
}

inline nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

namespace detail {

/// Wraps an expression error with the field path it came from.
inline Expression parse_expression_at(const ConfigNode& node, const std::vector<std::string>& vars) {
    const std::string text = node.string();
    try {
        return Expression::parse(text, vars);
    } catch (const Error& e) {
        node.fail(e.what());
    }
}

inline std::vector<std::string> tau_names(std::size_t m, const std::string& prefix) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) names.push_back(prefix + std::to_string(i));
    return names;
}

}  // namespace detail

/// Single-variable function from an expression in `var`.
inline UnaryFunction unary_from_expression(const Expression& e) {
    return UnaryFunction(
        [e](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            const T v[1] = {s};
            return e(std::span<const T>(v, 1));
        },
        e.text());
}

/// Two-variable function from an expression in (t1, t2).
inline BinaryFunction binary_from_expression(const Expression& e) {
    return BinaryFunction(
        [e](const auto& a, const auto& b) {
            using T = std::decay_t<decltype(a)>;
            const T v[2] = {a, b};
            return e(std::span<const T>(v, 2));
        },
        e.text());
}

/// Function of (t1..tm) from an expression.
inline VectorFunction vector_from_expression(const Expression& e) {
    return VectorFunction([e](auto v) { return e(v); }, e.text());
}

/// Field u(tau1..taum, x) from an expression; t1..tm are accepted as aliases.
inline ScalarField field_from_expression(const std::string& text, std::size_t m) {
    std::vector<std::string> vars = detail::tau_names(m, "tau");
    vars.push_back("x");
    for (const auto& alias : detail::tau_names(m, "t")) vars.push_back(alias);
    const Expression e = Expression::parse(text, vars);
    FieldFunction fn(
        [e, m](auto tau, const auto& x) {
            using T = std::decay_t<decltype(x)>;
            std::vector<T> args(tau.begin(), tau.end());
            args.push_back(x);
            for (std::size_t i = 0; i < m; ++i) args.push_back(tau[i]);
            return e(std::span<const T>(args));
        },
        text);
    return ScalarField(m, std::move(fn), text);
}

/// {"kind": "huxley_normalized" | "cubic" (a, b) | "fitzhugh_nagumo" (delta) | "custom" (expression)}
inline ReactionTerm parse_reaction(const ConfigNode& node) {
    const std::string kind = node.at("kind").string();
    if (kind == "huxley_normalized") return ReactionTerm::huxley_normalized();
    if (kind == "cubic") return ReactionTerm::cubic(node.at("a").number(), node.at("b").number());
    if (kind == "fitzhugh_nagumo") return ReactionTerm::fitzhugh_nagumo(node.at("delta").number());
    if (kind == "custom") {
        const ConfigNode expr = node.at("expression");
        try {
            return ReactionTerm::custom(expr.string());
        } catch (const Error& e) {
            expr.fail(e.what());
        }
    }
    node.at("kind").fail("unknown reaction kind '" + kind + "'");
}

/// {"form": "canonical" | "canonical_convective" | "general", "m", "n", "mu", "k",
///  "reaction", "h": [expressions in t1..tm]}
inline PDESpec parse_pde(const ConfigNode& node) {
    PDESpec p;
    const std::string form = node.string_or("form", "canonical");
    if (form == "canonical") p.form = Form::Canonical;
    else if (form == "canonical_convective") p.form = Form::CanonicalConvective;
    else if (form == "general") p.form = Form::General;
    else node.at("form").fail("unknown form '" + form + "'");

    p.m = static_cast<int>(node.has("m") ? node.at("m").count(1) : 1);
    p.n = static_cast<int>(node.has("n") ? node.at("n").count(1) : 2);
    p.mu = node.number_or("mu", 1.0);
    p.k = node.number_or("k", 0.0);
    p.reaction = node.has("reaction") ? parse_reaction(node.at("reaction")) : ReactionTerm::huxley_normalized();
    if (auto h = node.find("h")) {
        if (!node.has("m")) p.m = static_cast<int>(h->size());
        const auto vars = detail::tau_names(static_cast<std::size_t>(p.m), "t");
        for (std::size_t i = 0; i < h->size(); ++i) {
            p.h.push_back(vector_from_expression(detail::parse_expression_at(h->at(i), vars)));
        }
    }
    try {
        p.validate();
    } catch (const Error& e) {
        node.fail(e.what());
    }
    return p;
}

/// Arbitrary functions of the omega coordinates:
///   {"kind": "constant", "c"} | {"kind": "linear", "coeffs", "offset"}
///   {"kind": "sine", "amplitude", "frequencies", "phase"}
///   {"kind": "expquad", "coeffs", "amplitude"} | {"kind": "polynomial", "rows"}
///   {"kind": "sum" | "product", "terms": [...]}
inline ArbitraryFunction parse_arbitrary_function(const ConfigNode& node) {
    const std::string kind = node.at("kind").string();
    if (kind == "constant") return ArbitraryFunction::constant(node.at("c").number());
    if (kind == "linear") return ArbitraryFunction::linear(node.at("coeffs").numbers(), node.number_or("offset", 0.0));
    if (kind == "sine") {
        return ArbitraryFunction::sine(node.number_or("amplitude", 1.0), node.at("frequencies").numbers(),
                                       node.number_or("phase", 0.0));
    }
    if (kind == "expquad") return ArbitraryFunction::expquad(node.at("coeffs").numbers(), node.number_or("amplitude", 1.0));
    if (kind == "polynomial") {
        const ConfigNode rows = node.at("rows");
        std::vector<std::vector<double>> r;
        for (std::size_t i = 0; i < rows.size(); ++i) r.push_back(rows.at(i).numbers());
        return ArbitraryFunction::polynomial(std::move(r));
    }
    if (kind == "sum" || kind == "product") {
        const ConfigNode terms = node.at("terms");
        if (terms.size() < 1) terms.fail("needs at least one term");
        ArbitraryFunction acc = parse_arbitrary_function(terms.at(std::size_t{0}));
        for (std::size_t i = 1; i < terms.size(); ++i) {
            const ArbitraryFunction next = parse_arbitrary_function(terms.at(i));
            acc = kind == "sum" ? acc + next : acc * next;
        }
        return acc;
    }
    node.at("kind").fail("unknown function kind '" + kind + "'");
}

/// A resolved solution document.
struct SolutionSpec {
    ScalarField field;
    std::optional<CatalogEntry> entry;
    nlohmann::ordered_json description;
};

/// {"catalog": id, "params": {"m", "P", "x0", "C"}}
/// {"expression": "...", "m"}                      (variables tau1..taum, x)
/// {"constraint_profile": "...", "k", "m"}         (variables omega1..omega(m-1), y)
/// {"proposition": <solution>, "k", "P", "m"}
/// Any of these may carry "orbit": {"tau0", "x0", "reflect"}.
inline SolutionSpec parse_solution(const ConfigNode& node, std::size_t m_hint) {
    SolutionSpec s;
    auto read_m = [&](const ConfigNode& n) { return n.has("m") ? n.at("m").count(1) : m_hint; };
    try {
        if (auto id = node.find("catalog")) {
            CatalogParams params;
            params.m = m_hint;
            s.description["catalog"] = id->string();
            if (auto pn = node.find("params")) {
                if (pn->has("m")) params.m = pn->at("m").count(1);
                if (pn->has("P")) params.P = parse_arbitrary_function(pn->at("P"));
                if (pn->has("x0")) params.x0 = pn->at("x0").number();
                if (pn->has("C")) params.C = pn->at("C").number();
            }
            CatalogId cid;
            try {
                cid = catalog_id(id->string());
            } catch (const Error& e) {
                id->fail(e.what());
            }
            s.entry = catalog(cid, params);
            s.field = s.entry->field;
            nlohmann::ordered_json resolved = nlohmann::ordered_json::object();
            for (const auto& [k, v] : s.entry->numbers) resolved[k] = v;
            s.description["parameters"] = resolved;
            if (!s.entry->P_description.empty()) s.description["P"] = s.entry->P_description;
        } else if (auto expr = node.find("expression")) {
            const std::size_t m = read_m(node);
            try {
                s.field = field_from_expression(expr->string(), m);
            } catch (const Error& e) {
                expr->fail(e.what());
            }
            s.description["expression"] = expr->string();
            s.description["m"] = m;
        } else if (auto prof = node.find("constraint_profile")) {
            const std::size_t m = read_m(node);
            std::vector<std::string> vars = detail::tau_names(m - 1, "omega");
            vars.push_back("y");
            const Expression e = detail::parse_expression_at(*prof, vars);
            FieldFunction fn(
                [e](auto omega, const auto& y) {
                    using T = std::decay_t<decltype(y)>;
                    std::vector<T> args(omega.begin(), omega.end());
                    args.push_back(y);
                    return e(std::span<const T>(args));
                },
                e.text());
            const double k = node.at("k").number();
            s.field = build_constraint_solution(fn, k, m, {}, e.text());
            s.description["constraint_profile"] = e.text();
            s.description["k"] = k;
            s.description["m"] = m;
        } else if (auto inner = node.find("proposition")) {
            const std::size_t m = read_m(node);
            SolutionSpec phi = parse_solution(*inner, m);
            const ArbitraryFunction P = parse_arbitrary_function(node.at("P"));
            const double k = node.at("k").number();
            s.field = build_proposition_form(phi.field, k, P, m);
            s.description["proposition"] = phi.description;
            s.description["k"] = k;
            s.description["P"] = P.describe();
        } else {
            node.fail("expected one of 'catalog', 'expression', 'constraint_profile', 'proposition'");
        }
        if (auto orbit = node.find("orbit")) {
            std::vector<double> tau0 = orbit->has("tau0") ? orbit->at("tau0").numbers() : std::vector<double>{};
            const double x0 = orbit->number_or("x0", 0.0);
            const bool reflect = orbit->boolean_or("reflect", false);
            s.field = symmetry_orbit(s.field, tau0, x0, reflect);
            s.description["orbit"] = {{"tau0", tau0}, {"x0", x0}, {"reflect", reflect}};
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        node.fail(e.what());
    }
    return s;
}

/// {"ranges": [[lo, hi], ...], "counts": [...]}
inline Grid parse_grid(const ConfigNode& node) {
    const ConfigNode ranges = node.at("ranges");
    const ConfigNode counts = node.at("counts");
    if (ranges.size() != counts.size()) node.fail("ranges and counts differ in length");
    std::vector<Axis> axes;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        const auto r = ranges.at(i).range();
        axes.push_back({r[0], r[1], counts.at(i).count(1)});
    }
    try {
        return Grid(std::move(axes));
    } catch (const Error& e) {
        node.fail(e.what());
    }
}

inline Box parse_box(const ConfigNode& node) {
    Box box;
    for (std::size_t i = 0; i < node.size(); ++i) box.push_back(node.at(i).range());
    return box;
}

/// Transformations:
///   {"kind": "time_rescale", "h": [expressions in t], "domain"}
///   {"kind": "log", "domain"}
///   {"kind": "scaling", "mu", "a", "b", "m"}
///   {"kind": "shift_y", "k", "m"}
///   {"kind": "characteristic", "h1", "h2" (in t1, t2), "first_integral" (expression or "traced"),
///    "W1", "W2" (in s), "domain", "trace_step"}
///   {"kind": "compose", "outer", "inner"}
inline Transformation parse_transform(const ConfigNode& node) {
    const std::string kind = node.at("kind").string();
    try {
        if (kind == "identity") return identity_transform(node.has("m") ? node.at("m").count(1) : 1);
        if (kind == "time_rescale") {
            const ConfigNode hs = node.at("h");
            std::vector<UnaryFunction> h;
            for (std::size_t i = 0; i < hs.size(); ++i) {
                h.push_back(unary_from_expression(detail::parse_expression_at(hs.at(i), {"t"})));
            }
            return time_rescale(h, parse_box(node.at("domain")), node.number_or("quadrature_tol", 1e-10));
        }
        if (kind == "log") return log_transform(parse_box(node.at("domain")));
        if (kind == "scaling") {
            return scaling_normalize(node.at("mu").number(), node.at("a").number(), node.at("b").number(),
                                     node.has("m") ? node.at("m").count(1) : 1);
        }
        if (kind == "shift_y") return shift_to_wave_frame(node.at("k").number(), node.has("m") ? node.at("m").count(1) : 1);
        if (kind == "characteristic") {
            const std::vector<std::string> tv = {"t1", "t2"};
            const BinaryFunction h1 = binary_from_expression(detail::parse_expression_at(node.at("h1"), tv));
            const BinaryFunction h2 = binary_from_expression(detail::parse_expression_at(node.at("h2"), tv));
            const Box domain = parse_box(node.at("domain"));
            const double step = node.number_or("trace_step", 1e-3);
            const std::string fi = node.string_or("first_integral", "traced");
            const FirstIntegral I =
                fi == "traced"
                    ? FirstIntegral::traced(h1, h2, domain.empty() ? 0.0 : domain[0][0], step)
                    : FirstIntegral::closed_form(binary_from_expression(detail::parse_expression_at(node.at("first_integral"), tv)));
            const UnaryFunction W1 = unary_from_expression(detail::parse_expression_at(node.at("W1"), {"s"}));
            const UnaryFunction W2 = unary_from_expression(detail::parse_expression_at(node.at("W2"), {"s"}));
            return characteristic_transform(h1, h2, I, W1, W2, domain, step);
        }
        if (kind == "compose") return compose(parse_transform(node.at("outer")), parse_transform(node.at("inner")));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        // Domain and coefficient problems are numeric, not syntactic.
        if (e.code() == ErrorCode::CoefficientVanishes || e.code() == ErrorCode::DegenerateTransform) throw;
        node.fail(e.what());
    }
    node.at("kind").fail("unknown transform kind '" + kind + "'");
}

/// {"mu", "k", "reaction"}
inline WaveProblem parse_wave_problem(const ConfigNode& node) {
    WaveProblem w;
    w.mu = node.number_or("mu", 1.0);
    w.k = node.number_or("k", 0.0);
    w.reaction = node.has("reaction") ? parse_reaction(node.at("reaction")) : ReactionTerm::huxley_normalized();
    try {
        w.validate();
    } catch (const Error& e) {
        node.fail(e.what());
    }
    return w;
}

}  // namespace mtrd
