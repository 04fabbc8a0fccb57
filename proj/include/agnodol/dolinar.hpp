#pragma once

#include <vector>

#include "agnodol/optics.hpp"

namespace agnodol {

// Photodetection click rates conditioned on the running hypothesis z:
// lambda_t when z matches the true class, mu_t when it contradicts it.
struct DolinarRates {
    double lambda_t = 0.0;
    double mu_t = 0.0;
};

// Trajectory of a success-probability ODE on t in [0, 1].
struct OdeSolution {
    std::vector<double> times;
    std::vector<double> pc;
    long solver_steps = 0;
    // Producer-defined self check: max deviation from the matching closed
    // form (dolinar_ode_solve) or implicit relation (agnostic_ode_solve).
    double max_residual = 0.0;
};

// Closed-form success of the optimal Dolinar receiver after signal fraction
// t: P_c(t) = (1 + sqrt(1 - 4 p+ p- e^{-4 a t})) / 2, a = |alpha|^2.
double dolinar_success(double p_plus, double p_minus, double alpha_abs_sq, double t);

// Rates generated by the optimal displacement gamma(t) = alpha/(2 P_c(t)-1):
// lambda = 4a (1-P_c)^2/(2P_c-1)^2, mu = 4a P_c^2/(2P_c-1)^2. Divergent at
// P_c = 1/2 (flat priors, t -> 0); callers bootstrap past that point.
DolinarRates dolinar_optimal_rates(double p_plus, double alpha_abs_sq, double t);

// Integrates dP_c/dt = 4a P_c (1-P_c) / (2 P_c - 1) from P_c(0) = max(p+,p-)
// with fixed-step RK4 in s = sqrt(t) (the substitution removes the
// integrable t^{-1/2} funnel at a flat-prior start). p+ = 1/2 starts from the
// closed-form value at t0 = 1e-6. max_residual is the largest deviation from
// dolinar_success over the stored grid.
OdeSolution dolinar_ode_solve(double p_plus, double alpha_abs_sq, int grid_steps);

// Dolinar receiver calibrated for |+-beta> but fed |+-alpha>, flat priors:
//   P = 1/2 + Re(alpha beta*) (1 - e^{-2(a+b)}) / ((a+b) sqrt(1 - e^{-4b})),
// a = |alpha|^2, b = |beta|^2. The believed amplitude beta fixes the control
// trajectory, hence the sqrt(1 - e^{-4b}) normalization. Bounded by the
// Helstrom value for every beta, with equality at beta = alpha.
double miscalibrated_success(const Amplitude& beta, const Amplitude& alpha);

// Verification path: propagate dP_c/dt = mu - (lambda+mu) P_c under the
// miscalibrated control gamma(t) = beta / sqrt(1 - e^{-4 b t}) by RK4 in
// s = sqrt(t), bootstrapped at t0 = 1e-10. Oracle for the closed form above.
double miscalibrated_success_propagated(const Amplitude& beta, const Amplitude& alpha,
                                        int grid_steps = 20000);

// Estimate&Discriminate: heterodyne all n copies into an estimate
// beta ~ (n/pi) e^{-n|beta-alpha|^2}, then run the beta-calibrated receiver.
// Tensor Gauss-Hermite with quad_points nodes per axis, centered at alpha
// with scale 1/sqrt(n).
double eande_success(const Amplitude& alpha, int n, int quad_points = 64);

// Same, plus the quad_points-doubling self check. The kernel is non-smooth
// at beta = 0, so small alpha*sqrt(n) legitimately trips the flag.
struct EandeResult {
    double success = 0.0;
    double doubling_delta = 0.0;  // |GH(q) - GH(2q)|
    bool flagged = false;         // doubling_delta > 1e-8
};
EandeResult eande_success_checked(const Amplitude& alpha, int n, int quad_points = 64);

}  // namespace agnodol
