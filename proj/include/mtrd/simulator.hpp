#pragma once

/// Finite-difference solver for the canonical multitime equation along the
/// characteristic direction. With s = tau^m and omega_j = tau^m - tau^j held
/// fixed, sum_i d/dtau^i becomes d/ds, leaving u_s = mu u_xx + f(u).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mtrd/error.hpp"
#include "mtrd/field.hpp"
#include "mtrd/pde.hpp"

namespace mtrd {

/// The 1D problem for one omega slice.
struct RD1DTemplate {
    double mu = 1.0;
    ReactionTerm reaction = ReactionTerm::huxley_normalized();
    std::vector<double> omega;

    std::size_t m() const { return omega.size() + 1; }

    /// tau with tau^m = s and tau^j = s - omega_j.
    std::vector<double> tau_of(double s) const {
        std::vector<double> tau(m());
        for (std::size_t j = 0; j < omega.size(); ++j) tau[j] = s - omega[j];
        tau.back() = s;
        return tau;
    }
};

inline RD1DTemplate reduce_to_characteristic(const PDESpec& pde, std::vector<double> omega) {
    pde.validate();
    if (pde.form != Form::Canonical || pde.n != 2) {
        throw Error(ErrorCode::UnsupportedForm, "characteristic reduction needs the canonical form with n = 2");
    }
    if (omega.size() + 1 != static_cast<std::size_t>(pde.m)) {
        throw Error(ErrorCode::DimensionMismatch, "omega must have m - 1 entries");
    }
    return {pde.mu, pde.reaction, std::move(omega)};
}

/// A manufactured-solution run: initial and Dirichlet data come from `exact`.
struct RD1DProblem {
    RD1DTemplate reduced;
    std::array<double, 2> x_range{-10.0, 10.0};
    double s_end = 1.0;
    ScalarField exact;
};

enum class Scheme { ExplicitFtcs, CrankNicolson };

inline std::string to_string(Scheme s) { return s == Scheme::ExplicitFtcs ? "explicit_ftcs" : "crank_nicolson"; }

struct GridResult {
    std::vector<double> x_nodes;
    /// Stored time levels (every `stride`-th step plus the last one).
    std::vector<double> s_nodes;
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> u_exact;
    double dx = 0.0;
    double ds = 0.0;
    std::size_t steps = 0;
    Scheme scheme = Scheme::ExplicitFtcs;
    std::vector<double> omega;

    /// Max |u - u_exact| over stored levels.
    double linf_error() const {
        double e = 0.0;
        for (std::size_t r = 0; r < u.size(); ++r) {
            for (std::size_t i = 0; i < u[r].size(); ++i) e = std::max(e, std::abs(u[r][i] - u_exact[r][i]));
        }
        return e;
    }
};

struct MarchOptions {
    /// Store every `stride`-th level; 0 picks a stride giving about 200 rows.
    std::size_t stride = 0;
};

namespace detail {

/// Thomas algorithm; a, b, c are sub-, main and super-diagonal.
inline void solve_tridiagonal(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                              std::span<double> d) {
    const std::size_t n = b.size();
    std::vector<double> cp(n), dp(n);
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double denom = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / denom;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / denom;
    }
    d[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) d[i] = dp[i] - cp[i] * d[i + 1];
}

inline double reaction_at(const ReactionTerm& f, const std::vector<double>& u, std::size_t i, double dx) {
    const double s[2] = {u[i], (u[i + 1] - u[i - 1]) / (2.0 * dx)};
    return f(std::span<const double>(s, 2));
}

}  // namespace detail

/// Marches u_s = mu u_xx + f(u) from s = 0 to s_end. The reaction is explicit
/// in both schemes; Crank-Nicolson treats diffusion implicitly.
inline GridResult march(const RD1DProblem& problem, double dx, double ds, Scheme scheme, const MarchOptions& opt = {}) {
    const RD1DTemplate& red = problem.reduced;
    if (!(dx > 0.0) || !(ds > 0.0)) throw Error(ErrorCode::BadParameter, "dx and ds must be positive");
    if (!(red.mu > 0.0)) throw Error(ErrorCode::BadParameter, "marching needs mu > 0");
    if (!(problem.s_end > 0.0) || !(problem.x_range[0] < problem.x_range[1])) {
        throw Error(ErrorCode::BadRange, "empty run box");
    }
    if (!problem.exact || problem.exact.m() != red.m()) {
        throw Error(ErrorCode::DimensionMismatch, "exact field must take m times");
    }
    if (scheme == Scheme::ExplicitFtcs && ds > dx * dx / (2.0 * red.mu) * (1.0 + 1e-12)) {
        throw Error(ErrorCode::StabilityViolation, "explicit scheme needs ds <= dx^2 / (2 mu)");
    }

    const double L = problem.x_range[1] - problem.x_range[0];
    const std::size_t cells = static_cast<std::size_t>(std::llround(L / dx));
    if (cells < 2) throw Error(ErrorCode::BadParameter, "grid needs at least three nodes");
    const double h = L / static_cast<double>(cells);
    const std::size_t n = cells + 1;
    const std::size_t steps = static_cast<std::size_t>(std::llround(std::ceil(problem.s_end / ds - 1e-9)));
    const double k = problem.s_end / static_cast<double>(steps);

    GridResult res;
    res.dx = h;
    res.ds = k;
    res.steps = steps;
    res.scheme = scheme;
    res.omega = red.omega;
    res.x_nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.x_nodes[i] = i + 1 == n ? problem.x_range[1] : problem.x_range[0] + i * h;

    auto exact_at = [&](double s, double x) {
        Point p{red.tau_of(s), x};
        if (!problem.exact.in_domain(p) || problem.exact.is_singular(p)) {
            throw Error(ErrorCode::SingularPoint, "manufactured data sampled at a singular point");
        }
        return problem.exact(p);
    };
    auto exact_row = [&](double s) {
        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = exact_at(s, res.x_nodes[i]);
        return row;
    };

    const std::size_t stride = opt.stride ? opt.stride : std::max<std::size_t>(1, steps / 200);
    std::vector<double> u = exact_row(0.0);
    res.s_nodes.push_back(0.0);
    res.u.push_back(u);
    res.u_exact.push_back(u);

    const double r = red.mu * k / (h * h);
    std::vector<double> next(n), a(n - 2), b(n - 2), c(n - 2), rhs(n - 2);
    for (std::size_t step = 1; step <= steps; ++step) {
        const double s = step == steps ? problem.s_end : static_cast<double>(step) * k;
        const double left = exact_at(s, res.x_nodes.front());
        const double right = exact_at(s, res.x_nodes.back());
        if (scheme == Scheme::ExplicitFtcs) {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                next[i] = u[i] + r * (u[i + 1] - 2.0 * u[i] + u[i - 1]) + k * detail::reaction_at(red.reaction, u, i, h);
            }
        } else {
            // (I - r/2 D) u^{n+1} = (I + r/2 D) u^n + k f(u^n)
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const std::size_t j = i - 1;
                a[j] = -0.5 * r;
                b[j] = 1.0 + r;
                c[j] = -0.5 * r;
                rhs[j] = u[i] + 0.5 * r * (u[i + 1] - 2.0 * u[i] + u[i - 1]) + k * detail::reaction_at(red.reaction, u, i, h);
            }
            rhs.front() += 0.5 * r * left;
            rhs.back() += 0.5 * r * right;
            a.front() = 0.0;
            c.back() = 0.0;
            detail::solve_tridiagonal(a, b, c, rhs);
            for (std::size_t i = 1; i + 1 < n; ++i) next[i] = rhs[i - 1];
        }
        next.front() = left;
        next.back() = right;
        for (double v : next) {
            if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "solution became non-finite at s = " + std::to_string(s));
        }
        u.swap(next);
        if (step % stride == 0 || step == steps) {
            res.s_nodes.push_back(s);
            res.u.push_back(u);
            res.u_exact.push_back(exact_row(s));
        }
    }
    return res;
}

/// Least-squares slope dx/ds of the level-set crossing across stored rows.
inline double measure_front_speed(const GridResult& result, double level) {
    std::vector<double> s_pts, x_pts;
    for (std::size_t r = 0; r < result.u.size(); ++r) {
        const auto& row = result.u[r];
        int crossings = 0;
        double where = 0.0;
        for (std::size_t i = 0; i + 1 < row.size(); ++i) {
            const double a = row[i] - level;
            const double b = row[i + 1] - level;
            if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0)) {
                ++crossings;
                where = result.x_nodes[i] + (result.x_nodes[i + 1] - result.x_nodes[i]) * a / (a - b);
            }
        }
        if (crossings != 1) {
            throw Error(ErrorCode::LevelNotCrossed, "row s = " + std::to_string(result.s_nodes[r]) + " crosses level " +
                                                        std::to_string(level) + " " + std::to_string(crossings) + " times");
        }
        s_pts.push_back(result.s_nodes[r]);
        x_pts.push_back(where);
    }
    if (s_pts.size() < 2) throw Error(ErrorCode::LevelNotCrossed, "need at least two stored rows");
    const double n = static_cast<double>(s_pts.size());
    double ms = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < s_pts.size(); ++i) {
        ms += s_pts[i];
        mx += x_pts[i];
    }
    ms /= n;
    mx /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s_pts.size(); ++i) {
        num += (s_pts[i] - ms) * (x_pts[i] - mx);
        den += (s_pts[i] - ms) * (s_pts[i] - ms);
    }
    return num / den;
}

}  // namespace mtrd
