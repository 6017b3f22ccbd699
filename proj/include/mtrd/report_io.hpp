#pragma once

/// JSON and CSV output with a fixed float format (17 significant digits,
/// lowercase scientific) so identical runs give byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mtrd/pde.hpp"
#include "mtrd/report.hpp"
#include "mtrd/simulator.hpp"
#include "mtrd/transforms.hpp"
#include "mtrd/wave_ode.hpp"

namespace mtrd {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace detail {

inline void write_json(std::ostream& os, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << inner << Json(it.key()).dump() << ": ";
                write_json(os, it.value(), indent + 1);
            }
            os << "\n" << pad << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            const bool scalars = std::none_of(j.begin(), j.end(), [](const Json& v) { return v.is_structured(); });
            if (scalars) {
                os << "[";
                bool first = true;
                for (const auto& v : j) {
                    if (!first) os << ", ";
                    first = false;
                    write_json(os, v, indent + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << ",\n";
                first = false;
                os << inner;
                write_json(os, v, indent + 1);
            }
            os << "\n" << pad << "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            // JSON has no literal for non-finite numbers.
            if (std::isfinite(v)) os << format_double(v);
            else os << '"' << format_double(v) << '"';
            return;
        }
        default: os << j.dump(); return;
    }
}

}  // namespace detail

/// Pretty JSON with fixed float formatting.
inline std::string to_fixed_json(const Json& j) {
    std::ostringstream os;
    detail::write_json(os, j, 0);
    os << "\n";
    return os.str();
}

inline Json to_json(const std::vector<Axis>& axes) {
    Json a = Json::array();
    for (const Axis& ax : axes) a.push_back(Json{{"lo", ax.lo}, {"hi", ax.hi}, {"count", ax.count}});
    return a;
}

inline Json to_json(const Report& r) {
    return Json{{"subject", r.subject},
                {"max_abs_residual", r.max_abs_residual},
                {"rms_residual", r.rms_residual},
                {"points_evaluated", r.points_evaluated},
                {"points_masked", r.points_masked},
                {"axes", to_json(r.axes)},
                {"tolerance", r.tolerance},
                {"worst_point", r.worst_point},
                {"pass", r.pass}};
}

inline Json to_json(const Transformation& t) {
    Json domain = Json::array();
    for (const auto& r : t.domain()) domain.push_back(Json::array({r[0], r[1]}));
    Json numbers = Json::object();
    for (const auto& [k, v] : t.numbers) numbers[k] = v;
    Json labels = Json::object();
    for (const auto& [k, v] : t.labels) labels[k] = v;
    return Json{{"kind", to_string(t.kind())},
                {"m", t.m()},
                {"amplitude", t.amplitude()},
                {"domain", domain},
                {"parameters", numbers},
                {"functions", labels}};
}

inline Json to_json(const ReactionTerm& f) {
    Json j{{"kind", f.name()}};
    switch (f.kind()) {
        case ReactionTerm::Kind::Cubic:
            j["a"] = f.a();
            j["b"] = f.b();
            break;
        case ReactionTerm::Kind::FitzHughNagumo: j["delta"] = f.delta(); break;
        case ReactionTerm::Kind::Custom: j["expression"] = f.expression().text(); break;
        default: break;
    }
    return j;
}

inline Json to_json(const PDESpec& p) {
    Json j{{"form", to_string(p.form)}, {"m", p.m}, {"n", p.n}, {"mu", p.mu}, {"k", p.k}, {"reaction", to_json(p.reaction)}};
    if (!p.h.empty()) {
        Json h = Json::array();
        for (const auto& f : p.h) h.push_back(f.description());
        j["h"] = h;
    }
    return j;
}

/// Long format: s, x, u, u_exact, error.
inline void write_grid_csv(std::ostream& os, const GridResult& g) {
    os << "s,x,u,u_exact,error\n";
    for (std::size_t r = 0; r < g.u.size(); ++r) {
        for (std::size_t i = 0; i < g.x_nodes.size(); ++i) {
            os << format_double(g.s_nodes[r]) << ',' << format_double(g.x_nodes[i]) << ',' << format_double(g.u[r][i])
               << ',' << format_double(g.u_exact[r][i]) << ',' << format_double(g.u[r][i] - g.u_exact[r][i]) << '\n';
        }
    }
}

/// Two columns: y, u.
inline void write_profile_csv(std::ostream& os, const Profile& p) {
    os << "y,u\n";
    for (std::size_t i = 0; i < p.size(); ++i) os << format_double(p.y[i]) << ',' << format_double(p.u[i]) << '\n';
}

/// Fixed-format text table for a report.
inline std::string render_report(const Report& r) {
    std::ostringstream os;
    auto line = [&os](const char* key, const std::string& value) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%-22s: ", key);
        os << buf << value << '\n';
    };
    line("subject", r.subject);
    line("points evaluated", std::to_string(r.points_evaluated));
    line("points masked", std::to_string(r.points_masked));
    line("max |residual|", format_double(r.max_abs_residual));
    line("rms residual", format_double(r.rms_residual));
    line("tolerance", format_double(r.tolerance));
    line("result", r.pass ? "PASS" : "FAIL");
    return os.str();
}

}  // namespace mtrd
