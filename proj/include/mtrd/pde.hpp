#pragma once

/// Multitime reaction-diffusion PDEs
///
///   sum_i h^i(t) du/dt^i = mu d^n u/dx^n - k du/dx + f(u, ..., d^{n-1}u/dx^{n-1})
///
/// in general form (arbitrary h^i), canonical form (h^i = 1, k = 0) and
/// canonical convective form (h^i = 1, k free).

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtrd/dual.hpp"
#include "mtrd/error.hpp"
#include "mtrd/expression.hpp"
#include "mtrd/field.hpp"
#include "mtrd/poly_function.hpp"

namespace mtrd {

class ReactionTerm {
public:
    enum class Kind { HuxleyNormalized, Cubic, FitzHughNagumo, Custom };

    /// f(u) = u^2 - u^3
    static ReactionTerm huxley_normalized() { return ReactionTerm(Kind::HuxleyNormalized); }

    /// f(u) = -a u^3 + b u^2
    static ReactionTerm cubic(double a, double b) {
        ReactionTerm r(Kind::Cubic);
        r.a_ = a;
        r.b_ = b;
        return r;
    }

    /// f(u) = u (1 - u) (u - delta)
    static ReactionTerm fitzhugh_nagumo(double delta) {
        ReactionTerm r(Kind::FitzHughNagumo);
        r.delta_ = delta;
        return r;
    }

    /// Expression in u, ux, uxx, uxxx.
    static ReactionTerm custom(const std::string& expression) {
        ReactionTerm r(Kind::Custom);
        r.expr_ = Expression::parse(expression, {"u", "ux", "uxx", "uxxx"});
        return r;
    }

    /// Arguments: derivs[j] = d^j u/dx^j; missing entries are taken as 0.
    template <class T>
    T operator()(std::span<const T> derivs) const {
        const T& u = derivs[0];
        switch (kind_) {
            case Kind::HuxleyNormalized: return u * u - u * u * u;
            case Kind::Cubic: return -a_ * (u * u * u) + b_ * (u * u);
            case Kind::FitzHughNagumo: return u * (1.0 - u) * (u - delta_);
            case Kind::Custom: {
                std::array<T, 4> args{T(0.0), T(0.0), T(0.0), T(0.0)};
                for (std::size_t j = 0; j < derivs.size() && j < args.size(); ++j) args[j] = derivs[j];
                return expr_(std::span<const T>(args));
            }
        }
        return T(0.0);
    }

    double operator()(double u) const {
        const double d[1] = {u};
        return (*this)(std::span<const double>(d, 1));
    }

    /// df/du at a state that depends on u only.
    double derivative(double u) const {
        const D1 d[1] = {D1(u, 1.0)};
        return (*this)(std::span<const D1>(d, 1)).eps;
    }

    /// Highest spatial derivative order the term reads (0 = u only).
    int derivative_order() const {
        if (kind_ != Kind::Custom) return 0;
        for (int j = 3; j >= 1; --j) {
            if (expr_.uses(static_cast<std::size_t>(j))) return j;
        }
        return 0;
    }

    Kind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double delta() const { return delta_; }
    const Expression& expression() const { return expr_; }

    std::string name() const {
        switch (kind_) {
            case Kind::HuxleyNormalized: return "huxley_normalized";
            case Kind::Cubic: return "cubic";
            case Kind::FitzHughNagumo: return "fitzhugh_nagumo";
            case Kind::Custom: return "custom";
        }
        return "unknown";
    }

private:
    explicit ReactionTerm(Kind kind) : kind_(kind) {}

    Kind kind_;
    double a_ = 0.0;
    double b_ = 0.0;
    double delta_ = 0.0;
    Expression expr_;
};

inline double reaction_eval(const ReactionTerm& r, double u) { return r(u); }

enum class Form { General, Canonical, CanonicalConvective };

inline std::string to_string(Form f) {
    switch (f) {
        case Form::General: return "general";
        case Form::Canonical: return "canonical";
        case Form::CanonicalConvective: return "canonical_convective";
    }
    return "unknown";
}

struct PDESpec {
    int m = 1;
    int n = 2;
    double mu = 1.0;
    double k = 0.0;
    ReactionTerm reaction = ReactionTerm::huxley_normalized();
    /// h^i(t^1..t^m), present iff form == General.
    std::vector<VectorFunction> h;
    Form form = Form::Canonical;

    static PDESpec canonical(int m, double mu, ReactionTerm f) {
        PDESpec p;
        p.m = m;
        p.mu = mu;
        p.reaction = std::move(f);
        return p;
    }
    static PDESpec canonical_convective(int m, double mu, double k, ReactionTerm f) {
        PDESpec p = canonical(m, mu, std::move(f));
        p.k = k;
        p.form = Form::CanonicalConvective;
        return p;
    }
    static PDESpec general(std::vector<VectorFunction> h, double mu, ReactionTerm f) {
        PDESpec p = canonical(static_cast<int>(h.size()), mu, std::move(f));
        p.h = std::move(h);
        p.form = Form::General;
        return p;
    }
    /// Canonical normalized Huxley equation: sum_i u_{tau^i} = u_xx - u^3 + u^2.
    static PDESpec huxley(int m) { return canonical(m, 1.0, ReactionTerm::huxley_normalized()); }

    void validate() const {
        if (m < 1) throw Error(ErrorCode::BadParameter, "m must be >= 1");
        if (n < 1 || n > kMaxJetOrder) throw Error(ErrorCode::UnsupportedOrder, "spatial order out of range");
        if (mu == 0.0 || !std::isfinite(mu)) throw Error(ErrorCode::BadParameter, "mu must be finite and nonzero");
        if (form == Form::General && h.size() != static_cast<std::size_t>(m)) {
            throw Error(ErrorCode::MissingCoefficient, "general form needs one h^i per time variable");
        }
        if (form != Form::General && !h.empty()) {
            throw Error(ErrorCode::BadParameter, "coefficients h^i only allowed in general form");
        }
        if (form == Form::Canonical && k != 0.0) throw Error(ErrorCode::BadParameter, "canonical form has k = 0");
        if (reaction.derivative_order() > n - 1) {
            throw Error(ErrorCode::BadParameter, "reaction may depend on derivatives up to order n-1 only");
        }
    }
};

/// LHS - RHS from a precomputed jet.
inline double residual_from_jet(const PDESpec& pde, const JetValue& jet, const Point& p) {
    pde.validate();
    double lhs = 0.0;
    for (std::size_t i = 0; i < jet.d_tau.size(); ++i) {
        const double coeff = pde.form == Form::General ? pde.h[i].call<double>(std::span<const double>(p.tau)) : 1.0;
        lhs += coeff * jet.d_tau[i];
    }
    const std::size_t n = static_cast<std::size_t>(pde.n);
    const double f = pde.reaction(std::span<const double>(jet.spatial.data(), n));
    const double rhs = pde.mu * jet.spatial[n] - pde.k * jet.spatial[1] + f;
    return lhs - rhs;
}

enum class JetMethod { Dual, FiniteDifference };

/// Pointwise residual LHS - RHS of a candidate field.
inline double residual(const PDESpec& pde, const ScalarField& field, const Point& p,
                       JetMethod method = JetMethod::Dual, double h = 1e-5) {
    pde.validate();
    if (p.tau.size() != static_cast<std::size_t>(pde.m)) {
        throw Error(ErrorCode::DimensionMismatch, "point time count differs from pde.m");
    }
    const JetValue jet = method == JetMethod::Dual ? eval_jet(field, p, pde.n) : finite_diff_jet(field, p, h, pde.n);
    return residual_from_jet(pde, jet, p);
}

}  // namespace mtrd
