#include "agnodol/dolinar.hpp"

#include <cmath>
#include <stdexcept>

#include "agnodol/math/gauss_hermite.hpp"
#include "agnodol/math/rk4.hpp"

namespace agnodol {

namespace {

void require_prior_pair(double p_plus, double p_minus, const char* what) {
    if (!(p_plus >= 0.0) || !(p_minus >= 0.0) || std::fabs(p_plus + p_minus - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(what) + ": priors must be >= 0 and sum to 1");
}

}  // namespace

double dolinar_success(double p_plus, double p_minus, double alpha_abs_sq, double t) {
    require_prior_pair(p_plus, p_minus, "dolinar_success");
    if (!(alpha_abs_sq >= 0.0)) throw std::invalid_argument("dolinar_success: |alpha|^2 < 0");
    if (!(t >= 0.0)) throw std::invalid_argument("dolinar_success: t < 0");
    const double inner = 1.0 - 4.0 * p_plus * p_minus * std::exp(-4.0 * alpha_abs_sq * t);
    return 0.5 * (1.0 + std::sqrt(std::max(0.0, inner)));
}

DolinarRates dolinar_optimal_rates(double p_plus, double alpha_abs_sq, double t) {
    const double pc = dolinar_success(p_plus, 1.0 - p_plus, alpha_abs_sq, t);
    if (alpha_abs_sq == 0.0) return {0.0, 0.0};
    const double d = 2.0 * pc - 1.0;  // 0 only at a flat-prior start, rates diverge there
    const double d2 = d * d;
    return {4.0 * alpha_abs_sq * (1.0 - pc) * (1.0 - pc) / d2, 4.0 * alpha_abs_sq * pc * pc / d2};
}

OdeSolution dolinar_ode_solve(double p_plus, double alpha_abs_sq, int grid_steps) {
    require_prior_pair(p_plus, 1.0 - p_plus, "dolinar_ode_solve");
    if (!(alpha_abs_sq >= 0.0)) throw std::invalid_argument("dolinar_ode_solve: |alpha|^2 < 0");
    if (grid_steps < 100) throw std::invalid_argument("dolinar_ode_solve: grid_steps must be >= 100");

    const double a = alpha_abs_sq;
    const bool flat = std::fabs(p_plus - 0.5) < 1e-15;
    const double t0 = flat ? 1e-6 : 0.0;
    const double s0 = std::sqrt(t0);
    const double p0 = flat ? dolinar_success(0.5, 0.5, a, t0) : std::max(p_plus, 1.0 - p_plus);

    // dP/ds = 2s * 4a P (1-P) / (2P - 1); the s = sqrt(t) grid makes the
    // flat-prior funnel P - 1/2 ~ s regular. a = 0 pins P at its start value.
    const auto f = [a](double s, double p) {
        if (a == 0.0) return 0.0;
        const double d = 2.0 * p - 1.0;
        return 2.0 * s * 4.0 * a * p * (1.0 - p) / d;
    };

    OdeSolution sol;
    sol.times.reserve(grid_steps + 1);
    sol.pc.reserve(grid_steps + 1);
    sol.solver_steps = grid_steps;
    const double h = (1.0 - s0) / grid_steps;
    double s = s0, p = p0;
    sol.times.push_back(t0);
    sol.pc.push_back(p0);
    for (int i = 0; i < grid_steps; ++i) {
        p = rk4_step(f, s, p, h);
        s = s0 + (i + 1) * h;
        sol.times.push_back(s * s);
        sol.pc.push_back(p);
    }
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        const double ref = dolinar_success(p_plus, 1.0 - p_plus, a, sol.times[i]);
        sol.max_residual = std::max(sol.max_residual, std::fabs(sol.pc[i] - ref));
    }
    return sol;
}

double miscalibrated_success(const Amplitude& beta, const Amplitude& alpha) {
    const double a = abs_sq(alpha);
    const double b = abs_sq(beta);
    if (!(a > 0.0)) throw std::invalid_argument("miscalibrated_success: alpha must be nonzero");
    if (!(b > 0.0)) throw std::invalid_argument("miscalibrated_success: beta must be nonzero");
    const double r = alpha.real() * beta.real() + alpha.imag() * beta.imag();  // Re(alpha beta*)
    return 0.5 + r * (-std::expm1(-2.0 * (a + b))) / ((a + b) * std::sqrt(-std::expm1(-4.0 * b)));
}

double miscalibrated_success_propagated(const Amplitude& beta, const Amplitude& alpha,
                                        int grid_steps) {
    const double a = abs_sq(alpha);
    const double b = abs_sq(beta);
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("miscalibrated_success_propagated: amplitudes must be nonzero");
    if (grid_steps < 100)
        throw std::invalid_argument("miscalibrated_success_propagated: grid_steps must be >= 100");
    const double r = alpha.real() * beta.real() + alpha.imag() * beta.imag();

    // u = 2 P_c - 1; u' = (mu - lambda) - (lambda + mu) u with
    // mu - lambda = 4 Re(alpha beta*)/v, lambda + mu = 2(a + b/v^2),
    // v(t) = 2 Ptilde - 1 = sqrt(1 - e^{-4 b t}) from the believed amplitude.
    const auto du_ds = [a, b, r](double s, double u) {
        const double t = s * s;
        const double v = std::sqrt(-std::expm1(-4.0 * b * t));
        return 2.0 * s * (4.0 * r / v - 2.0 * (a + b / (v * v)) * u);
    };
    // small-t funnel: u(t) -> 2 Re(alpha betahat*) sqrt(t)
    const double t0 = 1e-10;
    double s = std::sqrt(t0);
    double u = 2.0 * (r / std::sqrt(b)) * s;
    const double h = (1.0 - s) / grid_steps;
    for (int i = 0; i < grid_steps; ++i) {
        u = rk4_step(du_ds, s, u, h);
        s += h;
    }
    return 0.5 * (1.0 + u);
}

double eande_success(const Amplitude& alpha, int n, int quad_points) {
    if (n < 1) throw std::invalid_argument("eande_success: n must be >= 1");
    if (quad_points < 2) throw std::invalid_argument("eande_success: quad_points must be >= 2");
    const double a = abs_sq(alpha);
    if (a == 0.0) return 0.5;  // Re(alpha beta*) = 0 for every estimate

    const GaussHermite gh = gauss_hermite(quad_points);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    double sum = 0.0;
    for (int i = 0; i < quad_points; ++i) {
        for (int j = 0; j < quad_points; ++j) {
            const Amplitude beta = alpha + Amplitude(gh.nodes[i] * scale, gh.nodes[j] * scale);
            // a node landing exactly on beta = 0 pairs with its mirror image,
            // so the odd kernel contributes its symmetric value 1/2
            const double v = (abs_sq(beta) == 0.0) ? 0.5 : miscalibrated_success(beta, alpha);
            sum += gh.weights[i] * gh.weights[j] * v;
        }
    }
    return sum / M_PI;
}

EandeResult eande_success_checked(const Amplitude& alpha, int n, int quad_points) {
    EandeResult out;
    out.success = eande_success(alpha, n, quad_points);
    const double doubled = eande_success(alpha, n, 2 * quad_points);
    out.doubling_delta = std::fabs(out.success - doubled);
    out.flagged = out.doubling_delta > 1e-8;
    return out;
}

}  // namespace agnodol
