#pragma once

#include <vector>

#include "agnodol/dolinar.hpp"
#include "agnodol/optics.hpp"

namespace agnodol {

// Beam-splitter receiver configuration. alpha_abs_sq_control is the
// amplitude-square the controller believes (equals the true value when
// calibrated); n_train copies feed the splitter as |sqrt(n) alpha>.
struct AgnosticConfig {
    int n_train = 1;
    double alpha_abs_sq_true = 0.0;
    double alpha_abs_sq_control = 0.0;
};

// Reflectivity-angle schedule theta(t) on [0, 1].
struct ControlTrajectory {
    std::vector<double> times;
    std::vector<double> theta;

    // theta in [0, pi/2], grids aligned, jumps <= pi/4 between samples
    void validate() const;
    // linear interpolation, clamped outside [times.front(), times.back()]
    double theta_at(double t) const;
};

// Click rates of the two output ports when the test state |+-alpha> is mixed
// with the concentrated training state at angle theta:
// lambda = a (cos th - sqrt(n) sin th)^2, mu = a (cos th + sqrt(n) sin th)^2.
// n_train = 0 (no training light) degenerates to lambda = mu = a cos^2 th.
DolinarRates agnostic_rates(double theta, double alpha_abs_sq, int n_train);

// Maximizer of dxi/dt over theta: theta* = atan2(sqrt(n), (n-1) xi) / 2,
// on the branch 2 theta* in (0, pi]; pi/4 at xi = 0 or n = 1.
double optimal_control(double xi, int n_train);

// Integrates dxi/dt = a n (1 - 4 xi^2) / (r + xi (n+1)), r = sqrt((n-1)^2
// xi^2 + n) (the rationalized form of a (r - xi (n+1)), stable near xi = 1/2)
// from xi(0) = 0 under the optimal control, uniform-t RK4. Requires a
// calibrated config (control amplitude equal to the true one); pc = xi + 1/2,
// max_residual is the worst implicit-relation residual over the grid.
OdeSolution agnostic_ode_solve(const AgnosticConfig& cfg, int grid_steps);

// a*t - F(xi) for the closed-form antiderivative
//   F(xi) = -((n-1)/(4n)) artanh((n-1) xi / r)
//           +((n+1)/(4n)) artanh((n+1) xi / r)
//           -((n+1)/(8n)) log(1 - 4 xi^2),     r = sqrt((n-1)^2 xi^2 + n),
// which satisfies F'(xi) = 1 / g(xi) along the optimal trajectory. Zero iff
// (t, xi) lies on the trajectory; strictly decreasing in xi past the root.
double implicit_solution_residual(double xi, double t, double alpha_abs_sq, int n_train);

// xi(t) by bisection of the implicit relation on [0, 1/2) to |residual| <= 1e-10.
double invert_implicit(double t, double alpha_abs_sq, int n_train);

// Optimal schedule computed from a believed amplitude-square: solves the
// xi-ODE at alpha_abs_sq_control and samples theta*(xi(t)) on a uniform grid
// with grid_points intervals.
ControlTrajectory optimal_trajectory(double alpha_abs_sq_control, int n_train, int grid_points);

// Propagates the linear filter dP_c/dt = mu(t) - (lambda+mu) P_c from
// P_c(0) = 1/2 with rates from agnostic_rates(control.theta_at(t),
// alpha_abs_sq_true, n_train). With the calibrated optimal control this
// reproduces agnostic_ode_solve; max_residual stays 0 (no closed form).
OdeSolution propagate_with_control(const AgnosticConfig& cfg, const ControlTrajectory& control,
                                   int grid_steps);

}  // namespace agnodol
