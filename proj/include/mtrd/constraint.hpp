#pragma once

/// Differential-constraint machinery: characteristic variables
/// omega_j = tau^m - tau^j annihilated by sum_i d/dtau^i, the solution
/// families built on them, and the explicit catalog for the normalized
/// Huxley equation sum_i u_{tau^i} = u_xx - u^3 + u^2.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtrd/arbitrary_function.hpp"
#include "mtrd/dual.hpp"
#include "mtrd/error.hpp"
#include "mtrd/field.hpp"
#include "mtrd/grid.hpp"
#include "mtrd/pde.hpp"

namespace mtrd {

/// omega_j = tau^m - tau^j for j = 1..m-1 (empty when m = 1).
template <class T>
std::vector<T> omega_coords(std::span<const T> tau) {
    std::vector<T> omega;
    if (tau.empty()) return omega;
    omega.reserve(tau.size() - 1);
    for (std::size_t j = 0; j + 1 < tau.size(); ++j) omega.push_back(tau.back() - tau[j]);
    return omega;
}

inline std::vector<double> omega_coords(const std::vector<double>& tau) {
    return omega_coords<double>(std::span<const double>(tau));
}

/// sum_i du/dtau^i at p.
inline double constraint_residual(const ScalarField& field, const Point& p) {
    const JetValue jet = eval_jet(field, p, 0);
    double s = 0.0;
    for (double d : jet.d_tau) s += d;
    return s;
}

/// Predicate on (omega, y) used to mark singular profile points.
using ProfilePredicate = std::function<bool(const std::vector<double>& omega, double y)>;

/// u(tau, x) = profile(omega(tau), x + k tau^m).
inline ScalarField build_constraint_solution(const FieldFunction& profile, double k, std::size_t m,
                                             ProfilePredicate singular = {}, std::string name = "constraint_solution") {
    if (m < 1) throw Error(ErrorCode::BadParameter, "m must be >= 1");
    FieldFunction fn([profile, k](auto tau, const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const std::vector<T> omega = omega_coords<T>(tau);
        const T y = x + k * tau[tau.size() - 1];
        return profile.call<T>(std::span<const T>(omega), y);
    });
    ScalarField u(m, std::move(fn), std::move(name));
    if (singular) {
        u = u.with_singular_set([singular, k](const Point& p) {
            return singular(omega_coords(p.tau), p.x + k * p.tau.back());
        });
    }
    return u;
}

/// u(tau, x) = phi(tau, x + k tau^m + P(omega)).
inline ScalarField build_proposition_form(const ScalarField& phi, double k, const ArbitraryFunction& P, std::size_t m) {
    if (phi.m() != m) throw Error(ErrorCode::DimensionMismatch, "phi must take m times");
    auto shift = [k, P](auto tau) {
        using T = std::decay_t<decltype(tau[0])>;
        const std::vector<T> omega = omega_coords<T>(tau);
        return k * tau[tau.size() - 1] + P(std::span<const T>(omega));
    };
    FieldFunction fn([phi, shift](auto tau, const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T moved = x + shift(tau);
        return phi.evaluate<T>(tau, moved);
    });
    auto moved_point = [shift](const Point& p) {
        Point q = p;
        q.x = p.x + shift(std::span<const double>(p.tau));
        return q;
    };
    return ScalarField(m, std::move(fn), phi.name() + " with P = " + P.describe())
        .with_singular_set([phi, moved_point](const Point& p) { return phi.is_singular(moved_point(p)); })
        .with_domain([phi, moved_point](const Point& p) { return phi.in_domain(moved_point(p)); })
        .with_max_order(phi.max_order());
}

/// u(tau + tau0, +-x + x0), with the minus sign iff reflect.
inline ScalarField symmetry_orbit(const ScalarField& field, std::vector<double> tau0, double x0, bool reflect) {
    if (tau0.empty()) tau0.assign(field.m(), 0.0);
    if (tau0.size() != field.m()) throw Error(ErrorCode::DimensionMismatch, "tau0 must have m entries");
    const double sign = reflect ? -1.0 : 1.0;
    FieldFunction fn([field, tau0, x0, sign](auto tau, const auto& x) {
        using T = std::decay_t<decltype(x)>;
        std::vector<T> shifted(tau.begin(), tau.end());
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = shifted[i] + tau0[i];
        const T moved = sign * x + x0;
        return field.evaluate<T>(std::span<const T>(shifted), moved);
    });
    auto map_point = [tau0, x0, sign](const Point& p) {
        Point q = p;
        for (std::size_t i = 0; i < q.tau.size(); ++i) q.tau[i] += tau0[i];
        q.x = sign * p.x + x0;
        return q;
    };
    std::string name = field.name() + (reflect ? " reflected" : "") + " shifted";
    return ScalarField(field.m(), std::move(fn), std::move(name))
        .with_singular_set([field, map_point](const Point& p) { return field.is_singular(map_point(p)); })
        .with_domain([field, map_point](const Point& p) { return field.in_domain(map_point(p)); })
        .with_max_order(field.max_order());
}

enum class CatalogId { RationalFamily, ExpFamily, RationalM1, ExpM1, TanhFront, CothBranch };

inline constexpr CatalogId kCatalogIds[] = {CatalogId::RationalFamily, CatalogId::ExpFamily, CatalogId::RationalM1,
                                            CatalogId::ExpM1,          CatalogId::TanhFront, CatalogId::CothBranch};

inline std::string_view to_string(CatalogId id) {
    switch (id) {
        case CatalogId::RationalFamily: return "rational_family";
        case CatalogId::ExpFamily: return "exp_family";
        case CatalogId::RationalM1: return "rational_m1";
        case CatalogId::ExpM1: return "exp_m1";
        case CatalogId::TanhFront: return "tanh_front";
        case CatalogId::CothBranch: return "coth_branch";
    }
    return "unknown";
}

inline CatalogId catalog_id(std::string_view name) {
    for (CatalogId id : kCatalogIds) {
        if (to_string(id) == name) return id;
    }
    throw Error(ErrorCode::BadParameter, "unknown catalog entry '" + std::string(name) + "'");
}

/// One-line parameter schema per entry.
inline std::string_view catalog_schema(CatalogId id) {
    switch (id) {
        case CatalogId::RationalFamily: return "m: int >= 1 (default 2); P: arbitrary function of m-1 omegas (default constant 1)";
        case CatalogId::ExpFamily: return "m: int >= 1 (default 2); P: arbitrary function of m-1 omegas (default constant 1)";
        case CatalogId::RationalM1: return "x0: real (default 1)";
        case CatalogId::ExpM1: return "C: real (default 1)";
        case CatalogId::TanhFront: return "x0: real (default 0) or C: real > 0 with x0 = sqrt(2) ln C";
        case CatalogId::CothBranch: return "x0: real (default 0) or C: real < 0 with x0 = sqrt(2) ln(-C)";
    }
    return "";
}

struct CatalogParams {
    std::size_t m = 2;
    std::optional<ArbitraryFunction> P;
    std::optional<double> x0;
    std::optional<double> C;
};

/// Masks: rational denominators and 1 + P e^s below this are singular.
inline constexpr double kPoleMask = 1e-2;
/// Mask on the coth argument around its pole line.
inline constexpr double kCothMask = 1e-1;

struct CatalogEntry {
    CatalogId id;
    ScalarField field;
    PDESpec pde;
    Grid default_grid;
    /// Resolved scalar parameters (m, x0, C, k, ...).
    std::vector<std::pair<std::string, double>> numbers;
    std::string P_description;
    /// exp_family only: P was seen negative somewhere on the test box, so
    /// 1 + P e^s can vanish.
    bool may_have_poles = false;
};

namespace detail {

inline Grid default_catalog_grid(std::size_t m, double t_hi, double x_lo, double x_hi) {
    std::vector<Axis> axes;
    const std::size_t t_count = m == 1 ? 50 : m == 2 ? 20 : m == 3 ? 10 : 6;
    const std::size_t x_count = m == 1 ? 200 : 50;
    for (std::size_t i = 0; i < m; ++i) axes.push_back({0.0, t_hi, t_count});
    axes.push_back({x_lo, x_hi, x_count});
    return Grid(std::move(axes));
}

}  // namespace detail

/// Closed-form solutions of the normalized Huxley equation.
///
///   rational_family  u = sqrt2 / (x - sqrt2 tau^m + P(omega))
///   exp_family       u = 1 / (1 + P(omega) exp(x/sqrt2 - tau^m/2))
///   rational_m1      u = sqrt2 / (x - sqrt2 tau + x0)
///   exp_m1           u = 1 / (1 + C exp(x/sqrt2 - tau/2))
///   tanh_front       u = (1 + tanh(-(sqrt2/4)(x + x0) + tau/4)) / 2
///   coth_branch      u = (1 + coth(-(sqrt2/4)(x + x0) + tau/4)) / 2
///
/// exp_m1 with C > 0 equals tanh_front with x0 = sqrt2 ln C, and with C < 0
/// equals coth_branch with x0 = sqrt2 ln(-C): equating exponents in
/// 1/(1 + e^z) = (1 - tanh(z/2))/2 with z = x/sqrt2 - tau/2 + ln C gives
/// ln C / 2 = sqrt2 x0 / 4.
inline CatalogEntry catalog(CatalogId id, const CatalogParams& params = {}) {
    const double s2 = std::numbers::sqrt2;
    CatalogEntry e{id, {}, {}, {}, {}, {}, false};

    switch (id) {
        case CatalogId::RationalFamily:
        case CatalogId::ExpFamily: {
            const std::size_t m = params.m;
            if (m < 1) throw Error(ErrorCode::BadParameter, "m must be >= 1");
            const ArbitraryFunction P = params.P.value_or(ArbitraryFunction::constant(1.0));
            if (P.min_arity() > m - 1) {
                throw Error(ErrorCode::BadParameter, "P reads more omega variables than m - 1");
            }
            e.P_description = P.describe();
            e.numbers = {{"m", static_cast<double>(m)}};
            e.pde = PDESpec::huxley(static_cast<int>(m));
            if (id == CatalogId::RationalFamily) {
                FieldFunction profile([P, s2](auto omega, const auto& y) { return s2 / (y + P(omega)); });
                e.field = build_constraint_solution(
                    profile, -s2, m,
                    [P](const std::vector<double>& omega, double y) { return std::abs(y + P(omega)) < kPoleMask; },
                    "rational_family");
                e.numbers.emplace_back("k", -s2);
                e.default_grid = detail::default_catalog_grid(m, 1.0, -3.0, 3.0);
            } else {
                FieldFunction profile([P, s2](auto omega, const auto& y) {
                    return 1.0 / (1.0 + P(omega) * exp(y / s2));
                });
                e.field = build_constraint_solution(
                    profile, -1.0 / s2, m,
                    [P, s2](const std::vector<double>& omega, double y) {
                        return std::abs(1.0 + P(omega) * std::exp(y / s2)) < kPoleMask;
                    },
                    "exp_family");
                e.numbers.emplace_back("k", -1.0 / s2);
                e.default_grid = detail::default_catalog_grid(m, 2.0, -10.0, 10.0);
                if (m > 1) {
                    // Sample P over the omega range spanned by the test box.
                    std::mt19937_64 rng(12345);
                    std::uniform_real_distribution<double> dist(-2.0, 2.0);
                    std::vector<double> omega(m - 1);
                    for (int i = 0; i < 1000 && !e.may_have_poles; ++i) {
                        for (double& w : omega) w = dist(rng);
                        e.may_have_poles = P(omega) < 0.0;
                    }
                } else {
                    e.may_have_poles = P(std::vector<double>{}) < 0.0;
                }
            }
            break;
        }
        case CatalogId::RationalM1: {
            const double x0 = params.x0.value_or(1.0);
            FieldFunction fn([s2, x0](auto tau, const auto& x) { return s2 / (x - s2 * tau[0] + x0); });
            e.field = ScalarField(1, std::move(fn), "rational_m1").with_singular_set([s2, x0](const Point& p) {
                return std::abs(p.x - s2 * p.tau[0] + x0) < kPoleMask;
            });
            e.numbers = {{"x0", x0}, {"k", -s2}};
            e.pde = PDESpec::huxley(1);
            e.default_grid = detail::default_catalog_grid(1, 1.0, -3.0, 3.0);
            break;
        }
        case CatalogId::ExpM1: {
            const double C = params.C.value_or(1.0);
            FieldFunction fn([s2, C](auto tau, const auto& x) { return 1.0 / (1.0 + C * exp(x / s2 - tau[0] / 2.0)); });
            e.field = ScalarField(1, std::move(fn), "exp_m1").with_singular_set([s2, C](const Point& p) {
                return std::abs(1.0 + C * std::exp(p.x / s2 - p.tau[0] / 2.0)) < kPoleMask;
            });
            e.numbers = {{"C", C}, {"k", -1.0 / s2}};
            e.may_have_poles = C < 0.0;
            e.pde = PDESpec::huxley(1);
            e.default_grid = detail::default_catalog_grid(1, 2.0, -10.0, 10.0);
            break;
        }
        case CatalogId::TanhFront:
        case CatalogId::CothBranch: {
            const bool is_tanh = id == CatalogId::TanhFront;
            if (params.x0 && params.C) throw Error(ErrorCode::BadParameter, "give either x0 or C, not both");
            double x0 = params.x0.value_or(0.0);
            if (params.C) {
                const double C = *params.C;
                if (is_tanh && !(C > 0.0)) throw Error(ErrorCode::BadParameter, "tanh_front needs C > 0");
                if (!is_tanh && !(C < 0.0)) throw Error(ErrorCode::BadParameter, "coth_branch needs C < 0");
                x0 = s2 * std::log(std::abs(C));
            }
            auto arg = [s2, x0](const auto& tau0, const auto& x) { return -(s2 / 4.0) * (x + x0) + tau0 / 4.0; };
            if (is_tanh) {
                FieldFunction fn([arg](auto tau, const auto& x) { return 0.5 * (1.0 + tanh(arg(tau[0], x))); });
                e.field = ScalarField(1, std::move(fn), "tanh_front");
            } else {
                FieldFunction fn([arg](auto tau, const auto& x) { return 0.5 * (1.0 + coth(arg(tau[0], x))); });
                e.field = ScalarField(1, std::move(fn), "coth_branch").with_singular_set([arg](const Point& p) {
                    return std::abs(arg(p.tau[0], p.x)) < kCothMask;
                });
            }
            const double C = (is_tanh ? 1.0 : -1.0) * std::exp(x0 / s2);
            e.numbers = {{"x0", x0}, {"C", C}, {"k", -1.0 / s2}};
            e.pde = PDESpec::huxley(1);
            e.default_grid = detail::default_catalog_grid(1, 2.0, -10.0, 10.0);
            break;
        }
    }
    return e;
}

inline CatalogEntry catalog(std::string_view name, const CatalogParams& params = {}) {
    return catalog(catalog_id(name), params);
}

}  // namespace mtrd
