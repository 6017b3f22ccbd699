#pragma once

#include <cmath>
#include <functional>

#include "mtrd/dual.hpp"
#include "mtrd/poly_function.hpp"

namespace mtrd {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double fa, double b, double fb, double m, double fm, double whole,
                    double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 50) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// F(t) = integral from lo to t of ds / h(s), differentiable at any dual
/// depth: the value comes from quadrature, derivatives from dF/dt = 1/h(t).
class ReciprocalAntiderivative {
public:
    ReciprocalAntiderivative(UnaryFunction h, double lo, double tol = 1e-10) : h_(std::move(h)), lo_(lo), tol_(tol) {}

    template <class T>
    T operator()(const T& t) const {
        if constexpr (is_dual_v<T>) {
            using Inner = decltype(T{}.val);
            const Inner inv_h = Inner(1.0) / h_.call<Inner>(t.val);
            return T((*this)(t.val), t.eps * inv_h);
        } else {
            const auto& h = h_.get<double>();
            return adaptive_simpson([&h](double s) { return 1.0 / h(s); }, lo_, t, tol_);
        }
    }

    double lower_limit() const { return lo_; }
    const UnaryFunction& integrand_denominator() const { return h_; }

private:
    UnaryFunction h_;
    double lo_;
    double tol_;
};

}  // namespace mtrd
