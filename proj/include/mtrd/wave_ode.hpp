#pragma once

/// Traveling-profile ODE  mu u'' - k u' + f(u, u') = 0  for plane waves
/// u(tau, x) = U(x + k tau): initial-value integration and front shooting.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtrd/dual.hpp"
#include "mtrd/error.hpp"
#include "mtrd/pde.hpp"
#include "mtrd/rk4.hpp"

namespace mtrd {

/// Sampled profile with C1 cubic Hermite interpolation.
struct Profile {
    std::vector<double> y;
    std::vector<double> u;
    std::vector<double> du;
    /// Set when integration stopped because |u| exceeded the blow-up bound.
    bool blew_up = false;

    std::size_t size() const { return y.size(); }

    double value(double at) const { return eval(at, 0); }
    double slope(double at) const { return eval(at, 1); }
    double curvature(double at) const { return eval(at, 2); }

    /// Second derivative at an interior node of the quintic matching values and
    /// slopes at nodes i-1, i, i+1 (fourth-order accurate).
    double curvature_at_node(std::size_t i) const {
        if (i == 0 || i + 1 >= y.size()) throw Error(ErrorCode::BadParameter, "node must be interior");
        const double h = 0.5 * (y[i + 1] - y[i - 1]);
        // p(t) = u_i + du_i t + sum_{k=2..5} d_k (t/h)^k, fitted at t = y[i+1] - y[i] and y[i-1] - y[i].
        std::array<std::array<double, 5>, 4> A{};
        std::size_t row = 0;
        for (std::size_t j : {i - 1, i + 1}) {
            const double s = (y[j] - y[i]) / h;
            for (int k = 2; k <= 5; ++k) {
                A[row][k - 2] = std::pow(s, k);
                A[row + 1][k - 2] = k * std::pow(s, k - 1);
            }
            A[row][4] = u[j] - u[i] - du[i] * s * h;
            A[row + 1][4] = (du[j] - du[i]) * h;
            row += 2;
        }
        for (std::size_t c = 0; c < 4; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < 4; ++r) {
                if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
            }
            std::swap(A[c], A[piv]);
            for (std::size_t r = 0; r < 4; ++r) {
                if (r == c) continue;
                const double f = A[r][c] / A[c][c];
                for (std::size_t k = c; k < 5; ++k) A[r][k] -= f * A[c][k];
            }
        }
        return 2.0 * (A[0][4] / A[0][0]) / (h * h);
    }

private:
    std::size_t locate(double at) const {
        if (y.size() < 2) throw Error(ErrorCode::BadParameter, "profile needs at least two samples");
        if (at < y.front() || at > y.back()) throw Error(ErrorCode::OutOfDomain, "profile evaluated outside its range");
        auto it = std::upper_bound(y.begin(), y.end(), at);
        std::size_t i = static_cast<std::size_t>(it - y.begin());
        return std::min(i == 0 ? 0 : i - 1, y.size() - 2);
    }

    double eval(double at, int order) const { return segment(locate(at), at, order); }

    double segment(std::size_t i, double at, int order) const {
        const double h = y[i + 1] - y[i];
        const double t = (at - y[i]) / h;
        const double p0 = u[i], p1 = u[i + 1], m0 = du[i] * h, m1 = du[i + 1] * h;
        switch (order) {
            case 0: {
                const double t2 = t * t, t3 = t2 * t;
                return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
            }
            case 1: {
                const double t2 = t * t;
                return ((6 * t2 - 6 * t) * p0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * p1 + (3 * t2 - 2 * t) * m1) / h;
            }
            default:
                return ((12 * t - 6) * p0 + (6 * t - 4) * m0 + (-12 * t + 6) * p1 + (6 * t - 2) * m1) / (h * h);
        }
    }
};

struct WaveProblem {
    double mu = 1.0;
    double k = 0.0;
    ReactionTerm reaction = ReactionTerm::huxley_normalized();
    int n = 2;

    void validate() const {
        if (n != 2) throw Error(ErrorCode::UnsupportedOrder, "profile integration supports n = 2 only");
        if (mu == 0.0 || !std::isfinite(mu)) throw Error(ErrorCode::BadParameter, "mu must be finite and nonzero");
        if (reaction.derivative_order() > 1) throw Error(ErrorCode::BadParameter, "reaction may use u and u' only");
    }

    /// (u, u')' for the first-order system.
    template <class T>
    std::array<T, 2> rhs(const std::array<T, 2>& s) const {
        const T f = reaction(std::span<const T>(s.data(), 2));
        return {s[1], (k * s[1] - f) / mu};
    }
};

inline constexpr double kBlowUpBound = 1e6;

namespace detail {

inline void march_profile(const WaveProblem& prob, std::array<double, 2> state, double from, double to, double step,
                          std::vector<std::array<double, 3>>& out, bool& blew_up) {
    const double span = to - from;
    if (span == 0.0) return;
    const int steps = static_cast<int>(std::ceil(std::abs(span) / step - 1e-9));
    const double h = span / steps;
    auto f = [&prob](double, const std::array<double, 2>& s) { return prob.rhs(s); };
    for (int i = 1; i <= steps; ++i) {
        state = rk4_step(f, from + (i - 1) * h, state, h);
        if (!std::isfinite(state[0]) || std::abs(state[0]) > kBlowUpBound) {
            blew_up = true;
            return;
        }
        out.push_back({i == steps ? to : from + i * h, state[0], state[1]});
    }
}

}  // namespace detail

/// Integrates mu u'' - k u' + f = 0 with classical RK4 from (u0, du0) given at
/// y_start (default: the lower end) across [lo, hi].
inline Profile integrate_profile(const WaveProblem& prob, double u0, double du0, std::array<double, 2> y_range,
                                 double step, std::optional<double> y_start = std::nullopt) {
    prob.validate();
    if (!(step > 0.0)) throw Error(ErrorCode::BadParameter, "step must be positive");
    if (!(y_range[0] < y_range[1])) throw Error(ErrorCode::BadRange, "empty y range");
    const double y0 = y_start.value_or(y_range[0]);
    if (y0 < y_range[0] || y0 > y_range[1]) throw Error(ErrorCode::BadRange, "start point outside y range");

    bool blew_up = false;
    std::vector<std::array<double, 3>> back;
    detail::march_profile(prob, {u0, du0}, y0, y_range[0], step, back, blew_up);
    std::vector<std::array<double, 3>> fwd;
    detail::march_profile(prob, {u0, du0}, y0, y_range[1], step, fwd, blew_up);

    Profile p;
    p.blew_up = blew_up;
    const std::size_t total = back.size() + 1 + fwd.size();
    p.y.reserve(total);
    p.u.reserve(total);
    p.du.reserve(total);
    for (auto it = back.rbegin(); it != back.rend(); ++it) {
        p.y.push_back((*it)[0]);
        p.u.push_back((*it)[1]);
        p.du.push_back((*it)[2]);
    }
    p.y.push_back(y0);
    p.u.push_back(u0);
    p.du.push_back(du0);
    for (const auto& s : fwd) {
        p.y.push_back(s[0]);
        p.u.push_back(s[1]);
        p.du.push_back(s[2]);
    }
    return p;
}

/// Residual mu U'' - k U' + f(U, U') at interior nodes, with U'' taken from
/// the local quintic Hermite interpolant.
inline double profile_residual(const WaveProblem& prob, const Profile& p) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        const double s[2] = {p.u[i], p.du[i]};
        const double r = prob.mu * p.curvature_at_node(i) - prob.k * p.du[i] + prob.reaction(std::span<const double>(s, 2));
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

struct ShootOptions {
    double step = 1e-2;
    double offset = 1e-6;
    double speed_tol = 1e-8;
    double landing_tol = 1e-6;
    int max_bisections = 100;
    double y_max = 400.0;
};

struct ShootResult {
    /// The k of mu U'' - k U' + f = 0 for which the orbit connects the states.
    double speed = 0.0;
    Profile profile;
    /// Closest approach of the final orbit to u_plus.
    double landing_error = 0.0;
    int bisections = 0;
};

namespace detail {

struct ShotOutcome {
    int side = 0;  // +1 passed u_plus, -1 turned back
    double closest = std::numeric_limits<double>::infinity();
    Profile orbit;
};

inline ShotOutcome shoot_once(double mu, const ReactionTerm& f, double u_minus, double u_plus, double k,
                              const ShootOptions& opt, bool keep_orbit) {
    WaveProblem prob{mu, k, f, 2};
    const D1 jet_u[2] = {D1(u_minus, 1.0), D1(0.0, 0.0)};
    const D1 jet_v[2] = {D1(u_minus, 0.0), D1(0.0, 1.0)};
    const double f_u = f(std::span<const D1>(jet_u, 2)).eps;
    const double f_v = f(std::span<const D1>(jet_v, 2)).eps;
    // mu lambda^2 + (f_v - k) lambda + f_u = 0
    const double b = f_v - k;
    const double disc = b * b - 4.0 * mu * f_u;
    const double lambda = disc >= 0.0 ? (-b + std::sqrt(disc)) / (2.0 * mu) : -b / (2.0 * mu);

    ShotOutcome out;
    if (!(lambda > 0.0)) {
        out.side = -1;
        return out;
    }
    const double dir = u_plus > u_minus ? 1.0 : -1.0;
    std::array<double, 2> s{u_minus + dir * opt.offset, lambda * dir * opt.offset};
    auto rhs = [&prob](double, const std::array<double, 2>& st) { return prob.rhs(st); };
    double y = 0.0;
    auto record = [&](double at) {
        if (!keep_orbit) return;
        out.orbit.y.push_back(at);
        out.orbit.u.push_back(s[0]);
        out.orbit.du.push_back(s[1]);
    };
    record(y);
    std::size_t best_index = 0;
    while (y < opt.y_max) {
        s = rk4_step(rhs, y, s, opt.step);
        y += opt.step;
        if (!std::isfinite(s[0]) || std::abs(s[0]) > kBlowUpBound) {
            out.side = 1;
            break;
        }
        const double gap = std::abs(s[0] - u_plus);
        if (dir * (s[0] - u_plus) > 0.0) {
            out.side = 1;
            break;
        }
        if (dir * s[1] < 0.0) {
            out.side = -1;
            break;
        }
        record(y);
        if (gap < out.closest) {
            out.closest = gap;
            best_index = out.orbit.y.size();
        }
    }
    if (out.side == 0) out.side = dir * (s[0] - u_plus) > 0.0 ? 1 : -1;
    if (keep_orbit && best_index > 0) {
        out.orbit.y.resize(best_index);
        out.orbit.u.resize(best_index);
        out.orbit.du.resize(best_index);
    }
    return out;
}

}  // namespace detail

/// Bisection on k for a heteroclinic orbit leaving u_minus along its unstable
/// direction and arriving at u_plus.
inline ShootResult front_shoot(double mu, const ReactionTerm& f, double u_minus, double u_plus,
                               std::array<double, 2> speed_bracket, const ShootOptions& opt = {}) {
    if (!(mu > 0.0)) throw Error(ErrorCode::BadParameter, "mu must be positive");
    if (u_minus == u_plus) throw Error(ErrorCode::BadParameter, "end states must differ");
    if (std::abs(f(u_minus)) > 1e-10 || std::abs(f(u_plus)) > 1e-10) {
        throw Error(ErrorCode::BadParameter, "end states must be equilibria of the reaction");
    }
    double lo = std::min(speed_bracket[0], speed_bracket[1]);
    double hi = std::max(speed_bracket[0], speed_bracket[1]);
    const int side_lo = detail::shoot_once(mu, f, u_minus, u_plus, lo, opt, false).side;
    const int side_hi = detail::shoot_once(mu, f, u_minus, u_plus, hi, opt, false).side;
    if (side_lo == side_hi) {
        throw Error(ErrorCode::NoConnection, "shooting functional has no sign change on [" + std::to_string(lo) + ", " +
                                                 std::to_string(hi) + "]");
    }

    ShootResult result;
    detail::ShotOutcome best;
    for (int it = 0; it < opt.max_bisections; ++it) {
        const double mid = 0.5 * (lo + hi);
        detail::ShotOutcome shot = detail::shoot_once(mu, f, u_minus, u_plus, mid, opt, true);
        result.bisections = it + 1;
        if (shot.side == side_lo) lo = mid; else hi = mid;
        result.speed = mid;
        best = std::move(shot);
        if (hi - lo <= opt.speed_tol && best.closest <= opt.landing_tol) break;
    }
    if (!(best.closest <= opt.landing_tol)) {
        throw Error(ErrorCode::NoConnection, "orbit missed u_plus by " + std::to_string(best.closest));
    }
    result.profile = std::move(best.orbit);
    result.landing_error = best.closest;
    return result;
}

}  // namespace mtrd
