#pragma once

/// Coordinate and scaling transformations between the general, canonical and
/// normalized forms of multitime reaction-diffusion equations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtrd/dual.hpp"
#include "mtrd/error.hpp"
#include "mtrd/field.hpp"
#include "mtrd/grid.hpp"
#include "mtrd/poly_function.hpp"
#include "mtrd/quadrature.hpp"
#include "mtrd/report.hpp"
#include "mtrd/rk4.hpp"

namespace mtrd {

enum class TransformKind { Identity, TimeRescale, Log, Scaling, ShiftY, Characteristic, Composite };

inline std::string to_string(TransformKind k) {
    switch (k) {
        case TransformKind::Identity: return "identity";
        case TransformKind::TimeRescale: return "time_rescale";
        case TransformKind::Log: return "log";
        case TransformKind::Scaling: return "scaling";
        case TransformKind::ShiftY: return "shift_y";
        case TransformKind::Characteristic: return "characteristic";
        case TransformKind::Composite: return "composite";
    }
    return "unknown";
}

/// Writes the image of (tau, x) into (tau_out, x_out).
template <class T> using MapSig = void(std::span<const T>, const T&, std::span<T>, T&);
using PointMap = PolyFunction<MapSig>;
using Box = std::vector<std::array<double, 2>>;

/// An invertible map of (times, x) coordinates, optionally rescaling the
/// amplitude: u_target = amplitude * u_source.
class Transformation {
public:
    Transformation(TransformKind kind, std::size_t m, PointMap forward, std::function<Point(const Point&)> inverse,
                   Box domain = {}, double amplitude = 1.0)
        : kind_(kind),
          m_(m),
          forward_(std::make_shared<const PointMap>(std::move(forward))),
          inverse_(std::move(inverse)),
          domain_(std::move(domain)),
          amplitude_(amplitude) {}

    TransformKind kind() const { return kind_; }
    std::size_t m() const { return m_; }
    double amplitude() const { return amplitude_; }
    const Box& domain() const { return domain_; }

    /// Source points inside the time box (no constraint on x). An empty
    /// box means the map is valid everywhere.
    bool contains(const Point& p) const {
        if (domain_.empty()) return true;
        for (std::size_t i = 0; i < domain_.size() && i < p.tau.size(); ++i) {
            if (p.tau[i] < domain_[i][0] || p.tau[i] > domain_[i][1]) return false;
        }
        return true;
    }

    template <class T>
    void map(std::span<const T> tau, const T& x, std::span<T> tau_out, T& x_out) const {
        forward_->call<T>(tau, x, tau_out, x_out);
    }

    Point forward(const Point& p) const {
        if (p.tau.size() != m_) throw Error(ErrorCode::DimensionMismatch, "transformation time count mismatch");
        if (!contains(p)) throw Error(ErrorCode::OutOfDomain, to_string(kind_) + " applied outside its domain");
        Point q;
        q.tau.resize(m_);
        map<double>(std::span<const double>(p.tau), p.x, std::span<double>(q.tau), q.x);
        return q;
    }

    Point inverse(const Point& q) const { return inverse_(q); }

    /// Parameters recorded for serialization.
    std::map<std::string, double> numbers;
    std::map<std::string, std::string> labels;

private:
    TransformKind kind_;
    std::size_t m_;
    std::shared_ptr<const PointMap> forward_;
    std::function<Point(const Point&)> inverse_;
    Box domain_;
    double amplitude_;
};

inline Transformation identity_transform(std::size_t m) {
    PointMap fwd([](auto tau, const auto& x, auto out, auto& x_out) {
        std::copy(tau.begin(), tau.end(), out.begin());
        x_out = x;
    });
    return Transformation(TransformKind::Identity, m, std::move(fwd), [](const Point& q) { return q; });
}

namespace detail {

inline void check_box(const Box& box, std::size_t m) {
    if (box.size() != m) throw Error(ErrorCode::BadRange, "domain box needs one range per time variable");
    for (const auto& r : box) {
        if (!(r[0] < r[1])) throw Error(ErrorCode::BadRange, "empty domain range");
    }
}

}  // namespace detail

/// tau^i = integral from lo^i to t^i of ds / h^i(s), by adaptive Simpson
/// quadrature. Each h^i depends on t^i only and must keep one sign on the box.
inline Transformation time_rescale(const std::vector<UnaryFunction>& h, const Box& domain, double tol = 1e-10) {
    const std::size_t m = h.size();
    detail::check_box(domain, m);
    std::vector<ReciprocalAntiderivative> F;
    F.reserve(m);
    constexpr int kSamples = 1001;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& hi = h[i].get<double>();
        const double lo = domain[i][0];
        const double up = domain[i][1];
        double first_sign = 0.0;
        for (int j = 0; j < kSamples; ++j) {
            const double t = lo + (up - lo) * j / (kSamples - 1);
            const double v = hi(t);
            if (!(std::abs(v) >= 1e-12)) {
                throw Error(ErrorCode::CoefficientVanishes, "h^" + std::to_string(i + 1) + " vanishes near t=" +
                                                                std::to_string(t));
            }
            const double s = v > 0 ? 1.0 : -1.0;
            if (first_sign == 0.0) first_sign = s;
            if (s != first_sign) {
                throw Error(ErrorCode::CoefficientVanishes, "h^" + std::to_string(i + 1) + " changes sign on domain");
            }
        }
        F.emplace_back(h[i], lo, tol);
    }

    PointMap fwd([F](auto tau, const auto& x, auto out, auto& x_out) {
        for (std::size_t i = 0; i < F.size(); ++i) out[i] = F[i](tau[i]);
        x_out = x;
    });

    auto inverse = [F, h, domain](const Point& q) {
        Point p;
        p.x = q.x;
        p.tau.resize(F.size());
        for (std::size_t i = 0; i < F.size(); ++i) {
            const auto& hi = h[i].get<double>();
            double lo = domain[i][0];
            double up = domain[i][1];
            const double f_up = F[i](up);
            const double target = q.tau[i];
            if (target < std::min(0.0, f_up) - 1e-12 || target > std::max(0.0, f_up) + 1e-12) {
                throw Error(ErrorCode::OutOfDomain, "rescaled time outside the image of the domain");
            }
            const bool increasing = f_up > 0.0;
            double t = lo + (up - lo) * (target / f_up);
            for (int it = 0; it < 200; ++it) {
                const double g = F[i](t) - target;
                if ((g > 0.0) == increasing) up = t; else lo = t;
                double next = t - g * hi(t);
                if (!(next > lo && next < up)) next = 0.5 * (lo + up);
                const double step = std::abs(next - t);
                t = next;
                if (step <= 1e-15 * std::max(1.0, std::abs(t))) break;
            }
            p.tau[i] = t;
        }
        return p;
    };
    Transformation T(TransformKind::TimeRescale, m, std::move(fwd), std::move(inverse), domain);
    for (std::size_t i = 0; i < m; ++i) T.labels["h" + std::to_string(i + 1)] = h[i].description();
    T.numbers["quadrature_tol"] = tol;
    return T;
}

/// tau^i = ln t^i on a box with t^i > 0.
inline Transformation log_transform(const Box& domain) {
    const std::size_t m = domain.size();
    detail::check_box(domain, m);
    for (const auto& r : domain) {
        if (!(r[0] > 0.0)) throw Error(ErrorCode::BadParameter, "log transform needs t > 0");
    }
    PointMap fwd([](auto tau, const auto& x, auto out, auto& x_out) {
        for (std::size_t i = 0; i < tau.size(); ++i) out[i] = log(tau[i]);
        x_out = x;
    });
    auto inverse = [](const Point& q) {
        Point p = q;
        for (double& t : p.tau) t = std::exp(t);
        return p;
    };
    return Transformation(TransformKind::Log, m, std::move(fwd), std::move(inverse), domain);
}

/// u* = (a/b) u, x* = |b|/sqrt(mu a) x, tau*^i = (b^2/a) tau^i. Maps
/// solutions of sum u_tau = mu u_xx - a u^3 + b u^2 to solutions of the
/// normalized equation sum u_tau = u_xx - u^3 + u^2.
inline Transformation scaling_normalize(double mu, double a, double b, std::size_t m = 1) {
    if (!(mu > 0.0) || !(a > 0.0) || b == 0.0 || !std::isfinite(b)) {
        throw Error(ErrorCode::BadParameter, "scaling needs mu > 0, a > 0, b != 0");
    }
    const double time_scale = b * b / a;
    const double space_scale = std::abs(b) / std::sqrt(mu * a);
    PointMap fwd([time_scale, space_scale](auto tau, const auto& x, auto out, auto& x_out) {
        for (std::size_t i = 0; i < tau.size(); ++i) out[i] = time_scale * tau[i];
        x_out = space_scale * x;
    });
    auto inverse = [time_scale, space_scale](const Point& q) {
        Point p = q;
        for (double& t : p.tau) t /= time_scale;
        p.x /= space_scale;
        return p;
    };
    Transformation T(TransformKind::Scaling, m, std::move(fwd), std::move(inverse), {}, a / b);
    T.numbers = {{"mu", mu}, {"a", a}, {"b", b}, {"time_scale", time_scale}, {"space_scale", space_scale}};
    return T;
}

/// (tau, x) -> (tau, y) with y = x + k tau^m.
inline Transformation shift_to_wave_frame(double k, std::size_t m) {
    if (m < 1) throw Error(ErrorCode::BadParameter, "m must be >= 1");
    PointMap fwd([k](auto tau, const auto& x, auto out, auto& x_out) {
        std::copy(tau.begin(), tau.end(), out.begin());
        x_out = x + k * tau[tau.size() - 1];
    });
    auto inverse = [k](const Point& q) {
        Point p = q;
        p.x = q.x - k * q.tau.back();
        return p;
    };
    Transformation T(TransformKind::ShiftY, m, std::move(fwd), std::move(inverse));
    T.numbers["k"] = k;
    return T;
}

/// outer(inner(p)); amplitudes multiply.
inline Transformation compose(const Transformation& outer, const Transformation& inner) {
    if (outer.m() != inner.m()) throw Error(ErrorCode::DimensionMismatch, "composing maps of different m");
    PointMap fwd([outer, inner](auto tau, const auto& x, auto out, auto& x_out) {
        using T = std::decay_t<decltype(x)>;
        std::vector<T> mid(tau.size());
        T mid_x{};
        inner.map<T>(tau, x, std::span<T>(mid), mid_x);
        outer.map<T>(std::span<const T>(mid), mid_x, out, x_out);
    });
    auto inverse = [outer, inner](const Point& q) { return inner.inverse(outer.inverse(q)); };
    Transformation T(TransformKind::Composite, inner.m(), std::move(fwd), std::move(inverse), inner.domain(),
                     outer.amplitude() * inner.amplitude());
    T.labels["outer"] = to_string(outer.kind());
    T.labels["inner"] = to_string(inner.kind());
    return T;
}

/// A first integral I(t^1, t^2) of dt^1/h^1 = dt^2/h^2, either closed form
/// or traced numerically back to the transversal line t^1 = anchor.
class FirstIntegral {
public:
    static FirstIntegral closed_form(BinaryFunction I) {
        FirstIntegral f;
        f.closed_ = std::move(I);
        return f;
    }
    static FirstIntegral traced(BinaryFunction h1, BinaryFunction h2, double anchor, double step = 1e-3) {
        FirstIntegral f;
        f.h1_ = std::move(h1);
        f.h2_ = std::move(h2);
        f.anchor_ = anchor;
        f.step_ = step;
        return f;
    }

    bool is_closed_form() const { return static_cast<bool>(closed_); }

    template <class T>
    T operator()(const T& t1, const T& t2) const {
        if (closed_) return closed_.call<T>(t1, t2);
        return trace_characteristic(h1_, h2_, t1, t2, anchor_, step_)[0];
    }

    /// Follows the characteristic through (t1, t2) back to t^1 = anchor with
    /// RK4 in t^1. Returns {t^2 at the anchor, integral of dt^1/h^1 from the
    /// anchor to t1 along the characteristic}.
    template <class T>
    static std::array<T, 2> trace_characteristic(const BinaryFunction& h1, const BinaryFunction& h2, const T& t1,
                                                 const T& t2, double anchor, double step) {
        const double span = anchor - primal(t1);
        const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / step)));
        const T h = (T(anchor) - t1) / static_cast<double>(steps);
        const auto& f1 = h1.get<T>();
        const auto& f2 = h2.get<T>();
        auto rhs = [&](const T& s, const std::array<T, 2>& y) {
            const T a = f1(s, y[0]);
            return std::array<T, 2>{f2(s, y[0]) / a, T(1.0) / a};
        };
        std::array<T, 2> y{t2, T(0.0)};
        T s = t1;
        for (int i = 0; i < steps; ++i) {
            y = rk4_step(rhs, s, y, h);
            s = s + h;
        }
        return {y[0], -y[1]};
    }

private:
    BinaryFunction closed_;
    BinaryFunction h1_;
    BinaryFunction h2_;
    double anchor_ = 0.0;
    double step_ = 1e-3;
};

namespace detail {

template <class T>
std::array<T, 2> characteristic_map(const BinaryFunction& h1, const BinaryFunction& h2, const FirstIntegral& I,
                                    const UnaryFunction& W1, const UnaryFunction& W2, double anchor, double step,
                                    const T& t1, const T& t2) {
    const T g = FirstIntegral::trace_characteristic(h1, h2, t1, t2, anchor, step)[1];
    const T label = I(t1, t2);
    return {g + W1.call<T>(label), g + W2.call<T>(label)};
}

inline std::array<double, 4> jacobian(const std::function<std::array<D1, 2>(const D1&, const D1&)>& f, double t1,
                                      double t2) {
    const auto a = f(D1(t1, 1.0), D1(t2, 0.0));
    const auto b = f(D1(t1, 0.0), D1(t2, 1.0));
    return {a[0].eps, b[0].eps, a[1].eps, b[1].eps};
}

}  // namespace detail

/// Two-time map H^j = G + W^j(I), j = 1, 2, where G is the integral of
/// dt^1/h^1 along the characteristic from the line t^1 = lo^1. Both rows
/// satisfy h^1 dH/dt^1 + h^2 dH/dt^2 = 1.
inline Transformation characteristic_transform(const BinaryFunction& h1, const BinaryFunction& h2,
                                               const FirstIntegral& I, const UnaryFunction& W1,
                                               const UnaryFunction& W2, const Box& domain, double step = 1e-3) {
    detail::check_box(domain, 2);
    const double anchor = domain[0][0];

    auto map_d1 = [=](const D1& a, const D1& b) {
        return detail::characteristic_map<D1>(h1, h2, I, W1, W2, anchor, step, a, b);
    };
    constexpr int kSamples = 3;
    for (int i = 0; i < kSamples; ++i) {
        for (int j = 0; j < kSamples; ++j) {
            const double t1 = domain[0][0] + (domain[0][1] - domain[0][0]) * (0.1 + 0.4 * i);
            const double t2 = domain[1][0] + (domain[1][1] - domain[1][0]) * (0.1 + 0.4 * j);
            if (!(std::abs(h1.call<double>(t1, t2)) >= 1e-12)) {
                throw Error(ErrorCode::CoefficientVanishes, "h^1 vanishes on the domain");
            }
            const auto J = detail::jacobian(map_d1, t1, t2);
            const double det = J[0] * J[3] - J[1] * J[2];
            if (!(std::abs(det) >= 1e-10)) {
                throw Error(ErrorCode::DegenerateTransform,
                            "Jacobian determinant " + std::to_string(det) + " at (" + std::to_string(t1) + ", " +
                                std::to_string(t2) + "); W1 and W2 must be independent");
            }
        }
    }

    PointMap fwd([=](auto tau, const auto& x, auto out, auto& x_out) {
        using T = std::decay_t<decltype(x)>;
        const auto H = detail::characteristic_map<T>(h1, h2, I, W1, W2, anchor, step, tau[0], tau[1]);
        out[0] = H[0];
        out[1] = H[1];
        x_out = x;
    });

    auto inverse = [=](const Point& q) {
        auto residual = [&](double t1, double t2) {
            const auto H = detail::characteristic_map<double>(h1, h2, I, W1, W2, anchor, step, t1, t2);
            return std::array<double, 2>{H[0] - q.tau[0], H[1] - q.tau[1]};
        };
        // Start from the best point of a coarse scan, then damped Newton.
        double t1 = 0.0, t2 = 0.0, best = std::numeric_limits<double>::infinity();
        constexpr int kScan = 11;
        for (int i = 0; i < kScan; ++i) {
            for (int j = 0; j < kScan; ++j) {
                const double a = domain[0][0] + (domain[0][1] - domain[0][0]) * i / (kScan - 1);
                const double b = domain[1][0] + (domain[1][1] - domain[1][0]) * j / (kScan - 1);
                const auto r = residual(a, b);
                const double n = std::hypot(r[0], r[1]);
                if (n < best) {
                    best = n;
                    t1 = a;
                    t2 = b;
                }
            }
        }
        for (int it = 0; it < 100 && best > 1e-14; ++it) {
            const auto r = residual(t1, t2);
            const auto J = detail::jacobian(map_d1, t1, t2);
            const double det = J[0] * J[3] - J[1] * J[2];
            const double d1 = (J[3] * r[0] - J[1] * r[1]) / det;
            const double d2 = (-J[2] * r[0] + J[0] * r[1]) / det;
            double lambda = 1.0;
            for (int k = 0; k < 30; ++k, lambda *= 0.5) {
                const auto rn = residual(t1 - lambda * d1, t2 - lambda * d2);
                const double n = std::hypot(rn[0], rn[1]);
                if (n < best || k == 29) {
                    best = n;
                    break;
                }
            }
            t1 -= lambda * d1;
            t2 -= lambda * d2;
            if (std::abs(lambda * d1) + std::abs(lambda * d2) < 1e-16) break;
        }
        if (!(best <= 1e-9)) throw Error(ErrorCode::OutOfDomain, "characteristic map inversion did not converge");
        Point p;
        p.tau = {t1, t2};
        p.x = q.x;
        return p;
    };

    Transformation T(TransformKind::Characteristic, 2, std::move(fwd), std::move(inverse), domain);
    T.labels = {{"h1", h1.description()},
                {"h2", h2.description()},
                {"first_integral", I.is_closed_form() ? "closed_form" : "traced"},
                {"W1", W1.description()},
                {"W2", W2.description()}};
    T.numbers = {{"anchor", anchor}, {"trace_step", step}};
    return T;
}

/// Row residuals h^1 dH^j/dt^1 + h^2 dH^j/dt^2 - 1 (j = 1, 2) on a 2D grid.
inline Report verify_transform_system(const BinaryFunction& h1, const BinaryFunction& h2, const Transformation& T,
                                      const Grid& grid, double tol = 1e-8) {
    if (T.m() != 2 || grid.dimension() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "transform system check needs m = 2 and a 2D grid");
    }
    ResidualAccumulator acc;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        const std::vector<double> c = grid.coordinates(idx);
        Point p{c, 0.0};
        if (!T.contains(p)) throw Error(ErrorCode::OutOfDomain, "grid leaves the transformation domain");
        std::array<double, 4> J{};
        for (int dir = 0; dir < 2; ++dir) {
            std::array<D1, 2> tau{D1(c[0], dir == 0 ? 1.0 : 0.0), D1(c[1], dir == 1 ? 1.0 : 0.0)};
            std::array<D1, 2> out{};
            D1 x_out{};
            T.map<D1>(std::span<const D1>(tau), D1(0.0), std::span<D1>(out), x_out);
            J[static_cast<std::size_t>(dir)] = out[0].eps;
            J[static_cast<std::size_t>(2 + dir)] = out[1].eps;
        }
        const double a = h1.call<double>(c[0], c[1]);
        const double b = h2.call<double>(c[0], c[1]);
        const double row1 = a * J[0] + b * J[1] - 1.0;
        const double row2 = a * J[2] + b * J[3] - 1.0;
        acc.add(std::abs(row1) >= std::abs(row2) ? row1 : row2, c);
    }
    return std::move(acc).finish("transform system " + to_string(T.kind()), grid.axes(), tol);
}

/// Field on the source coordinates: p -> field(forward(p)) / amplitude.
inline ScalarField pullback_solution(const Transformation& T, const ScalarField& field) {
    if (field.m() != T.m()) throw Error(ErrorCode::DimensionMismatch, "field/transformation time count mismatch");
    const double inv_amp = 1.0 / T.amplitude();
    FieldFunction fn([T, field, inv_amp](auto tau, const auto& x) {
        using S = std::decay_t<decltype(x)>;
        std::vector<S> mapped(tau.size());
        S mapped_x{};
        T.map<S>(tau, x, std::span<S>(mapped), mapped_x);
        return inv_amp * field.evaluate<S>(std::span<const S>(mapped), mapped_x);
    });
    auto domain = [T, field](const Point& p) {
        if (!T.contains(p)) return false;
        return field.in_domain(T.forward(p));
    };
    auto singular = [T, field](const Point& p) { return field.is_singular(T.forward(p)); };
    return ScalarField(T.m(), std::move(fn), field.name() + " pulled back by " + to_string(T.kind()))
        .with_domain(std::move(domain))
        .with_singular_set(std::move(singular))
        .with_max_order(field.max_order());
}

}  // namespace mtrd
