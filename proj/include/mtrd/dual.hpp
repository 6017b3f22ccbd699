#pragma once

/// Forward-mode dual numbers a + bε with ε² = 0.
///
/// Nesting Dual<Dual<...>> gives higher derivatives: seeding every level of
/// an n-fold nested dual with a unit perturbation in the same variable puts
/// the k-th derivative in the component reached by k `eps` steps followed by
/// n - k `val` steps.

#include <cmath>
#include <cstddef>
#include <ostream>
#include <type_traits>

namespace mtrd {

using std::abs;
using std::atan;
using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;
using std::tanh;

template <class T>
struct Dual {
    T val{};
    T eps{};

    constexpr Dual() = default;
    constexpr Dual(double v) : val(v), eps(0.0) {}  // NOLINT: implicit lift of constants
    constexpr Dual(T v, T e) requires(!std::is_same_v<T, double>) : val(std::move(v)), eps(std::move(e)) {}
    constexpr Dual(double v, double e) requires std::is_same_v<T, double> : val(v), eps(e) {}

    Dual& operator+=(const Dual& o) { val += o.val; eps += o.eps; return *this; }
    Dual& operator-=(const Dual& o) { val -= o.val; eps -= o.eps; return *this; }
    Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
    Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};
template <class T> inline constexpr bool is_dual_v = is_dual<T>::value;

/// Nesting depth: 0 for double, 1 for Dual<double>, ...
template <class T> struct dual_depth : std::integral_constant<int, 0> {};
template <class T> struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.val + b.val, a.eps + b.eps}; }
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.val - b.val, a.eps - b.eps}; }
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a) { return {-a.val, -a.eps}; }
template <class T>
constexpr Dual<T> operator+(const Dual<T>& a) { return a; }
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return {a.val * b.val, a.eps * b.val + a.val * b.eps};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    T inv = T(1.0) / b.val;
    T q = a.val * inv;
    return {q, (a.eps - q * b.eps) * inv};
}

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, double b) { return {a.val + b, a.eps}; }
template <class T>
constexpr Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.val, b.eps}; }
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, double b) { return {a.val - b, a.eps}; }
template <class T>
constexpr Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.val, -b.eps}; }
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, double b) { return {a.val * b, a.eps * b}; }
template <class T>
constexpr Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.val, a * b.eps}; }
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, double b) { return {a.val / b, a.eps / b}; }
template <class T>
constexpr Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

// Comparisons look at the value part only.
template <class T> constexpr double primal(const T& v);

template <class A, class B>
    requires(is_dual_v<A> || is_dual_v<B>)
constexpr bool operator<(const A& a, const B& b) { return primal(a) < primal(b); }
template <class A, class B>
    requires(is_dual_v<A> || is_dual_v<B>)
constexpr bool operator>(const A& a, const B& b) { return primal(a) > primal(b); }
template <class A, class B>
    requires(is_dual_v<A> || is_dual_v<B>)
constexpr bool operator<=(const A& a, const B& b) { return primal(a) <= primal(b); }
template <class A, class B>
    requires(is_dual_v<A> || is_dual_v<B>)
constexpr bool operator>=(const A& a, const B& b) { return primal(a) >= primal(b); }

/// Innermost value of a (possibly nested) dual.
template <class T>
constexpr double primal(const T& v) {
    if constexpr (is_dual_v<T>) {
        return primal(v.val);
    } else {
        return static_cast<double>(v);
    }
}

// Chain rule helper: g(a) with g(a.val) = fv and g'(a.val) = dv.
template <class T>
constexpr Dual<T> chain(const Dual<T>& a, T fv, const T& dv) { return {std::move(fv), a.eps * dv}; }

template <class T>
Dual<T> exp(const Dual<T>& a) {
    T e = exp(a.val);
    return chain(a, e, e);
}
template <class T>
Dual<T> log(const Dual<T>& a) { return chain(a, log(a.val), T(1.0) / a.val); }
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
    T s = sqrt(a.val);
    return chain(a, s, T(0.5) / s);
}
template <class T>
Dual<T> sin(const Dual<T>& a) { return chain(a, sin(a.val), cos(a.val)); }
template <class T>
Dual<T> cos(const Dual<T>& a) { return chain(a, cos(a.val), -sin(a.val)); }
template <class T>
Dual<T> tan(const Dual<T>& a) {
    T t = tan(a.val);
    return chain(a, t, T(1.0) + t * t);
}
template <class T>
Dual<T> tanh(const Dual<T>& a) {
    T t = tanh(a.val);
    return chain(a, t, T(1.0) - t * t);
}
template <class T>
Dual<T> sinh(const Dual<T>& a) { return chain(a, sinh(a.val), cosh(a.val)); }
template <class T>
Dual<T> cosh(const Dual<T>& a) { return chain(a, cosh(a.val), sinh(a.val)); }
template <class T>
Dual<T> atan(const Dual<T>& a) { return chain(a, atan(a.val), T(1.0) / (T(1.0) + a.val * a.val)); }
template <class T>
Dual<T> abs(const Dual<T>& a) { return primal(a) < 0.0 ? -a : a; }
template <class T>
Dual<T> pow(const Dual<T>& a, double p) {
    return chain(a, pow(a.val, p), p * pow(a.val, p - 1.0));
}

/// Hyperbolic cotangent for plain and dual arguments.
template <class T>
T coth(const T& a) {
    return T(1.0) / tanh(a);
}

/// Integer power by repeated multiplication; valid for negative bases.
template <class T>
T ipow(const T& base, int e) {
    if (e < 0) return T(1.0) / ipow(base, -e);
    T result(1.0);
    T b = base;
    while (e > 0) {
        if (e & 1) result = result * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return result;
}

/// Seed x as the differentiation variable at every nesting level.
template <class T>
constexpr T variable(double x) {
    if constexpr (is_dual_v<T>) {
        using Inner = decltype(T{}.val);
        return T(variable<Inner>(x), Inner(1.0));
    } else {
        return x;
    }
}

/// k-th derivative stored in an n-fold nested dual seeded by variable<T>.
template <class T>
constexpr double derivative(const T& v, int k) {
    if constexpr (is_dual_v<T>) {
        return k > 0 ? derivative(v.eps, k - 1) : derivative(v.val, 0);
    } else {
        return static_cast<double>(v);
    }
}

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

/// Highest spatial derivative order supported by closed-form jets.
inline constexpr int kMaxJetOrder = 4;

template <class T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& d) {
    return os << '(' << d.val << " + " << d.eps << "e)";
}

}  // namespace mtrd
