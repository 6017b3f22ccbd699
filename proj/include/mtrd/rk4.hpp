#pragma once

#include <array>
#include <cstddef>

namespace mtrd {

/// One classical fourth-order Runge-Kutta step for y' = f(s, y).
/// Generic in the scalar type so it can be differentiated with duals.
template <class T, std::size_t N, class Rhs, class S>
std::array<T, N> rk4_step(const Rhs& f, const S& s, const std::array<T, N>& y, const S& h) {
    auto axpy = [](const std::array<T, N>& a, const S& c, const std::array<T, N>& b) {
        std::array<T, N> r = a;
        for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + c * b[i];
        return r;
    };
    const S half = h * 0.5;
    const std::array<T, N> k1 = f(s, y);
    const std::array<T, N> k2 = f(s + half, axpy(y, half, k1));
    const std::array<T, N> k3 = f(s + half, axpy(y, half, k2));
    const std::array<T, N> k4 = f(s + h, axpy(y, h, k3));
    std::array<T, N> out = y;
    const S sixth = h / 6.0;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace mtrd
