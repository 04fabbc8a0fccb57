#include "agnodol/math/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace agnodol {

namespace {

// Sum_k (x^2/4)^k / (k!)^2, stopped when a term no longer moves the sum.
double i0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

// (x/2) Sum_k (x^2/4)^k / (k! (k+1)!)
double i1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1.0));
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return 0.5 * x * sum;
}

// e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} Sum_k t_k with t_0 = 1 and
// t_{k+1} = t_k ((2k+1)^2 - 4 nu^2) / (8 (k+1) x). For x >= 15 the terms
// shrink below machine precision before the divergent tail is reached.
double i_scaled_asymptotic(int nu, double x) {
    const double fournu2 = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 60; ++k) {
        const double tk = 2.0 * k + 1.0;
        const double next = term * (tk * tk - fournu2) / (8.0 * (k + 1) * x);
        if (std::fabs(next) >= std::fabs(term)) break;  // divergent tail reached
        term = next;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

}  // namespace

double i0_scaled(double x) {
    if (!(x >= 0.0)) throw std::domain_error("i0_scaled: x must be >= 0");
    if (x < 15.0) return std::exp(-x) * i0_series(x);
    return i_scaled_asymptotic(0, x);
}

double i0(double x) {
    if (!(x >= 0.0)) throw std::domain_error("i0: x must be >= 0");
    if (x < 15.0) return i0_series(x);
    return std::exp(x) * i_scaled_asymptotic(0, x);
}

double i1_scaled(double x) {
    if (!(x >= 0.0)) throw std::domain_error("i1_scaled: x must be >= 0");
    if (x < 15.0) return std::exp(-x) * i1_series(x);
    return i_scaled_asymptotic(1, x);
}

}  // namespace agnodol
