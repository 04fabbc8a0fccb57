#pragma once

#include <array>

namespace agnodol {

// One classical RK4 step for y' = f(t, y), y an std::array<double, N>.
template <std::size_t N, class F>
std::array<double, N> rk4_step(const F& f, double t, const std::array<double, N>& y, double h) {
    std::array<double, N> k1 = f(t, y), tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    std::array<double, N> k2 = f(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    std::array<double, N> k3 = f(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
    std::array<double, N> k4 = f(t + h, tmp);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Scalar convenience overload.
template <class F>
double rk4_step(const F& f, double t, double y, double h) {
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace agnodol
