#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace agnodol {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // sum of per-interval estimates
    bool converged = false;
    int evals = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 pair on [-1, 1]. Column order: node, Gauss weight
// (zero on Kronrod-only nodes), Kronrod weight.
inline constexpr double g7k15_table[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

template <class Func>
double g7k15(const Func& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double y0 = f(c);
    double g7 = g7k15_table[0][1] * y0;
    double k15 = g7k15_table[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * g7k15_table[i][0];
        const double yi = f(c + dx) + f(c - dx);
        g7 += g7k15_table[i][1] * yi;
        k15 += g7k15_table[i][2] * yi;
    }
    g7 *= h;
    k15 *= h;
    // standard (200|G-K|)^{3/2} estimate of the Kronrod error
    err = 200.0 * std::fabs(g7 - k15);
    err *= std::sqrt(err);
    return k15;
}

}  // namespace detail

// Adaptive bisection with the G7K15 pair. Breakpoints seed the initial
// interval list (useful when the integrand has a known narrow peak that a
// single coarse pass would step over). Intervals are refined until each
// one's error estimate is below its length-proportional share of abs_tol
// or below rel_tol * |running sum|.
template <class Func>
QuadResult integrate_adaptive(const Func& f, const std::vector<double>& breakpoints,
                              double abs_tol = 1e-10, double rel_tol = 1e-12,
                              int max_intervals = 4000) {
    QuadResult out;
    if (breakpoints.size() < 2) return out;
    const double total_len = std::fabs(breakpoints.back() - breakpoints.front());
    if (total_len == 0.0) {
        out.converged = true;
        return out;
    }
    struct Seg { double a, b; };
    std::vector<Seg> stack;
    stack.reserve(64);
    for (std::size_t i = breakpoints.size() - 1; i > 0; --i)
        stack.push_back({breakpoints[i - 1], breakpoints[i]});

    double sum = 0.0, err_sum = 0.0;
    int used = static_cast<int>(stack.size());
    out.converged = true;
    while (!stack.empty()) {
        const Seg seg = stack.back();
        stack.pop_back();
        double err;
        const double s = detail::g7k15(f, seg.a, seg.b, err);
        out.evals += 15;
        const double share = abs_tol * std::fabs(seg.b - seg.a) / total_len;
        if (err <= share || err <= rel_tol * std::fabs(sum + s)) {
            sum += s;
            err_sum += err;
            continue;
        }
        if (used + 1 >= max_intervals) {  // budget exhausted: keep best value
            sum += s;
            err_sum += err;
            out.converged = false;
            continue;
        }
        const double mid = 0.5 * (seg.a + seg.b);
        stack.push_back({mid, seg.b});
        stack.push_back({seg.a, mid});
        used += 1;
    }
    out.value = sum;
    out.error_estimate = err_sum;
    return out;
}

template <class Func>
QuadResult integrate_adaptive(const Func& f, double a, double b,
                              double abs_tol = 1e-10, double rel_tol = 1e-12,
                              int max_intervals = 4000) {
    return integrate_adaptive(f, std::vector<double>{a, b}, abs_tol, rel_tol, max_intervals);
}

}  // namespace agnodol
