#pragma once

namespace agnodol {

// e^{-x} I0(x) for x >= 0. Power series below x = 15, scaled asymptotic
// series above; relative accuracy ~1e-12 over the full range.
double i0_scaled(double x);

// I0(x) = e^x * i0_scaled(x). Overflows for x > ~709 like exp does.
double i0(double x);

// e^{-x} I1(x) for x >= 0, same branch structure as i0_scaled.
double i1_scaled(double x);

}  // namespace agnodol
