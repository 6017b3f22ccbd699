#pragma once

/// Scalar fields u(tau^1..tau^m, x) with exact derivative jets.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtrd/dual.hpp"
#include "mtrd/error.hpp"
#include "mtrd/poly_function.hpp"

namespace mtrd {

struct Point {
    std::vector<double> tau;
    double x = 0.0;
};

/// Value and derivatives of a field at one point.
struct JetValue {
    /// spatial[j] = d^j u / dx^j, j = 0..order; spatial[0] is the value.
    std::vector<double> spatial;
    /// d_tau[i] = du / dtau^i
    std::vector<double> d_tau;

    double value() const { return spatial.at(0); }
    double d_x() const { return spatial.at(1); }
    double d_xx() const { return spatial.at(2); }
    int order() const { return static_cast<int>(spatial.size()) - 1; }
};

template <class T> using FieldSig = T(std::span<const T>, const T&);
using FieldFunction = PolyFunction<FieldSig>;

using PointPredicate = std::function<bool(const Point&)>;

/// An immutable evaluable field. Copies share the underlying closure.
class ScalarField {
public:
    ScalarField() = default;

    ScalarField(std::size_t m, FieldFunction fn, std::string name = {})
        : m_(m), fn_(std::make_shared<const FieldFunction>(std::move(fn))), name_(std::move(name)) {}

    std::size_t m() const { return m_; }
    const std::string& name() const { return name_; }
    int max_order() const { return max_order_; }

    template <class T>
    T evaluate(std::span<const T> tau, const T& x) const {
        return fn_->call<T>(tau, x);
    }

    double operator()(const Point& p) const {
        return evaluate<double>(std::span<const double>(p.tau), p.x);
    }

    bool is_singular(const Point& p) const { return singular_ && singular_(p); }
    bool in_domain(const Point& p) const { return !domain_ || domain_(p); }

    const PointPredicate& singular_set() const { return singular_; }
    const PointPredicate& domain() const { return domain_; }

    ScalarField with_singular_set(PointPredicate pred) const {
        ScalarField f = *this;
        f.singular_ = std::move(pred);
        return f;
    }
    ScalarField with_domain(PointPredicate pred) const {
        ScalarField f = *this;
        f.domain_ = std::move(pred);
        return f;
    }
    ScalarField with_name(std::string name) const {
        ScalarField f = *this;
        f.name_ = std::move(name);
        return f;
    }
    ScalarField with_max_order(int order) const {
        ScalarField f = *this;
        f.max_order_ = order;
        return f;
    }

    explicit operator bool() const { return static_cast<bool>(fn_); }

private:
    std::size_t m_ = 0;
    std::shared_ptr<const FieldFunction> fn_;
    PointPredicate singular_;
    PointPredicate domain_;
    std::string name_;
    int max_order_ = kMaxJetOrder;
};

inline void check_point(const ScalarField& field, const Point& p) {
    if (p.tau.size() != field.m()) {
        throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(p.tau.size()) +
                                                      " times, field expects " + std::to_string(field.m()));
    }
    if (!field.in_domain(p)) throw Error(ErrorCode::OutOfDomain, "point outside field domain");
    if (field.is_singular(p)) throw Error(ErrorCode::SingularPoint, "point in singular set of " + field.name());
}

namespace detail {

template <class T>
double spatial_derivatives(const ScalarField& field, const Point& p, std::vector<double>& out) {
    std::vector<T> tau(p.tau.begin(), p.tau.end());
    const T x = variable<T>(p.x);
    const T v = field.evaluate<T>(std::span<const T>(tau), x);
    constexpr int n = dual_depth<T>::value;
    for (int j = 1; j <= n; ++j) out[static_cast<std::size_t>(j)] = derivative(v, j);
    return derivative(v, 0);
}

}  // namespace detail

/// Value, every first time-derivative and spatial derivatives up to `order`,
/// by nested forward-mode dual arithmetic.
inline JetValue eval_jet(const ScalarField& field, const Point& p, int order = 2) {
    if (order < 0 || order > field.max_order()) {
        throw Error(ErrorCode::UnsupportedOrder, "order " + std::to_string(order) + " exceeds " +
                                                     std::to_string(field.max_order()));
    }
    check_point(field, p);

    JetValue jet;
    jet.spatial.assign(static_cast<std::size_t>(order) + 1, 0.0);
    switch (order) {
        case 0: jet.spatial[0] = field(p); break;
        case 1: jet.spatial[0] = detail::spatial_derivatives<D1>(field, p, jet.spatial); break;
        case 2: jet.spatial[0] = detail::spatial_derivatives<D2>(field, p, jet.spatial); break;
        case 3: jet.spatial[0] = detail::spatial_derivatives<D3>(field, p, jet.spatial); break;
        default: jet.spatial[0] = detail::spatial_derivatives<D4>(field, p, jet.spatial); break;
    }

    const std::size_t m = p.tau.size();
    jet.d_tau.resize(m);
    std::vector<D1> tau(p.tau.begin(), p.tau.end());
    const D1 x(p.x);
    for (std::size_t i = 0; i < m; ++i) {
        tau[i].eps = 1.0;
        jet.d_tau[i] = field.evaluate<D1>(std::span<const D1>(tau), x).eps;
        tau[i].eps = 0.0;
    }
    return jet;
}

/// Central-difference jet. First derivatives and the second spatial
/// derivative are O(h^2); third and fourth spatial derivatives use the
/// five-point (+-h, +-2h) stencil.
///
/// Stencil samples are evaluated in long double. In double precision the
/// cancellation in (f(x+h) - 2f(x) + f(x-h)) / h^2 leaves an error of about
/// 4 eps |u| / h^2, roughly 1e-5 at h = 1e-5, which is as large as the
/// truncation error the stencil is meant to expose.
inline JetValue finite_diff_jet(const ScalarField& field, const Point& p, double h = 1e-5, int order = 2) {
    using Wide = long double;
    if (!(h > 0.0)) throw Error(ErrorCode::BadParameter, "finite-difference step must be positive");
    if (order < 0 || order > kMaxJetOrder) throw Error(ErrorCode::UnsupportedOrder, "order out of range");
    if (p.tau.size() != field.m()) throw Error(ErrorCode::DimensionMismatch, "point/field time count mismatch");

    const std::vector<Wide> tau0(p.tau.begin(), p.tau.end());
    const Wide x0 = p.x;
    const Wide H = h;
    auto sample = [&](const std::vector<Wide>& tau, Wide x) {
        Point q;
        q.tau.assign(tau.begin(), tau.end());
        q.x = static_cast<double>(x);
        if (!field.in_domain(q) || field.is_singular(q)) {
            throw Error(ErrorCode::SingularStencil, "stencil point masked for " + field.name());
        }
        return field.evaluate<Wide>(std::span<const Wide>(tau), x);
    };
    auto shifted_x = [&](Wide dx) { return sample(tau0, x0 + dx); };

    JetValue jet;
    jet.spatial.assign(static_cast<std::size_t>(order) + 1, 0.0);
    const Wide f0 = sample(tau0, x0);
    jet.spatial[0] = static_cast<double>(f0);
    if (order >= 1) {
        const Wide fp = shifted_x(H);
        const Wide fm = shifted_x(-H);
        jet.spatial[1] = static_cast<double>((fp - fm) / (2 * H));
        if (order >= 2) jet.spatial[2] = static_cast<double>((fp - 2 * f0 + fm) / (H * H));
        if (order >= 3) {
            const Wide fp2 = shifted_x(2 * H);
            const Wide fm2 = shifted_x(-2 * H);
            jet.spatial[3] = static_cast<double>((fp2 - 2 * fp + 2 * fm - fm2) / (2 * H * H * H));
            if (order >= 4) jet.spatial[4] = static_cast<double>((fp2 - 4 * fp + 6 * f0 - 4 * fm + fm2) / (H * H * H * H));
        }
    }

    jet.d_tau.resize(p.tau.size());
    for (std::size_t i = 0; i < p.tau.size(); ++i) {
        std::vector<Wide> tau = tau0;
        tau[i] = tau0[i] + H;
        const Wide fp = sample(tau, x0);
        tau[i] = tau0[i] - H;
        const Wide fm = sample(tau, x0);
        jet.d_tau[i] = static_cast<double>((fp - fm) / (2 * H));
    }
    return jet;
}

namespace detail {

inline PointPredicate either(PointPredicate a, PointPredicate b) {
    if (!a) return b;
    if (!b) return a;
    return [a = std::move(a), b = std::move(b)](const Point& p) { return a(p) || b(p); };
}
inline PointPredicate both(PointPredicate a, PointPredicate b) {
    if (!a) return b;
    if (!b) return a;
    return [a = std::move(a), b = std::move(b)](const Point& p) { return a(p) && b(p); };
}

template <class Op>
ScalarField combine(const ScalarField& a, const ScalarField& b, Op op, const char* sym) {
    if (a.m() != b.m()) throw Error(ErrorCode::DimensionMismatch, "combining fields of different time counts");
    FieldFunction fn([a, b, op](auto tau, const auto& x) { return op(a.evaluate(tau, x), b.evaluate(tau, x)); });
    return ScalarField(a.m(), std::move(fn), "(" + a.name() + sym + b.name() + ")")
        .with_singular_set(either(a.singular_set(), b.singular_set()))
        .with_domain(both(a.domain(), b.domain()))
        .with_max_order(std::min(a.max_order(), b.max_order()));
}

}  // namespace detail

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return detail::combine(a, b, [](const auto& u, const auto& v) { return u + v; }, " + ");
}
inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return detail::combine(a, b, [](const auto& u, const auto& v) { return u - v; }, " - ");
}
inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return detail::combine(a, b, [](const auto& u, const auto& v) { return u * v; }, " * ");
}
inline ScalarField operator*(double s, const ScalarField& a) {
    FieldFunction fn([a, s](auto tau, const auto& x) { return s * a.evaluate(tau, x); });
    return ScalarField(a.m(), std::move(fn), std::to_string(s) + " * " + a.name())
        .with_singular_set(a.singular_set())
        .with_domain(a.domain())
        .with_max_order(a.max_order());
}

/// Constant field u = c.
inline ScalarField constant_field(std::size_t m, double c) {
    return ScalarField(m, FieldFunction([c](auto, const auto& x) {
                           using T = std::decay_t<decltype(x)>;
                           return T(c);
                       }),
                       "const(" + std::to_string(c) + ")");
}

/// Coordinate field u = tau^i (0-based index i).
inline ScalarField tau_coordinate(std::size_t m, std::size_t i) {
    if (i >= m) throw Error(ErrorCode::BadParameter, "time index out of range");
    return ScalarField(m, FieldFunction([i](auto tau, const auto&) { return tau[i]; }),
                       "tau" + std::to_string(i + 1));
}

/// Coordinate field u = x.
inline ScalarField x_coordinate(std::size_t m) {
    return ScalarField(m, FieldFunction([](auto, const auto& x) { return x; }), "x");
}

}  // namespace mtrd
