#include "agnodol/agnostic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agnodol/math/rk4.hpp"

namespace agnodol {

namespace {

void require_config(const AgnosticConfig& cfg, const char* what) {
    if (cfg.n_train < 0)
        throw std::invalid_argument(std::string(what) + ": n_train must be >= 0");
    if (!(cfg.alpha_abs_sq_true >= 0.0) || !std::isfinite(cfg.alpha_abs_sq_true) ||
        !(cfg.alpha_abs_sq_control >= 0.0) || !std::isfinite(cfg.alpha_abs_sq_control))
        throw std::invalid_argument(std::string(what) + ": amplitude-squares must be finite, >= 0");
}

// dxi/dt per unit a: n (1 - 4 xi^2) / (r + xi (n+1))
double xi_rate(double xi, int n) {
    const double dn = n;
    const double r = std::sqrt((dn - 1.0) * (dn - 1.0) * xi * xi + dn);
    return dn * (1.0 - 4.0 * xi * xi) / (r + xi * (dn + 1.0));
}

}  // namespace

void ControlTrajectory::validate() const {
    if (times.size() != theta.size() || times.size() < 2)
        throw std::invalid_argument("ControlTrajectory: need matching grids with >= 2 samples");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(theta[i] >= 0.0) || !(theta[i] <= M_PI / 2.0 + 1e-12))
            throw std::invalid_argument("ControlTrajectory: theta outside [0, pi/2]");
        if (i > 0) {
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("ControlTrajectory: times must be strictly increasing");
            if (std::fabs(theta[i] - theta[i - 1]) > M_PI / 4.0)
                throw std::invalid_argument("ControlTrajectory: jump larger than pi/4");
        }
    }
}

double ControlTrajectory::theta_at(double t) const {
    if (t <= times.front()) return theta.front();
    if (t >= times.back()) return theta.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return theta[i - 1] + w * (theta[i] - theta[i - 1]);
}

DolinarRates agnostic_rates(double theta, double alpha_abs_sq, int n_train) {
    if (!(theta >= 0.0) || !(theta <= M_PI / 2.0 + 1e-12))
        throw std::invalid_argument("agnostic_rates: theta outside [0, pi/2]");
    if (!(alpha_abs_sq >= 0.0)) throw std::invalid_argument("agnostic_rates: |alpha|^2 < 0");
    if (n_train < 0) throw std::invalid_argument("agnostic_rates: n_train must be >= 0");
    const double c = std::cos(theta), s = std::sin(theta);
    const double rn = std::sqrt(static_cast<double>(n_train));
    const double dm = c - rn * s, dp = c + rn * s;
    return {alpha_abs_sq * dm * dm, alpha_abs_sq * dp * dp};
}

double optimal_control(double xi, int n_train) {
    if (n_train < 1) throw std::invalid_argument("optimal_control: n_train must be >= 1");
    if (!(xi >= 0.0) || !(xi < 0.5)) throw std::invalid_argument("optimal_control: xi not in [0, 1/2)");
    return 0.5 * std::atan2(std::sqrt(static_cast<double>(n_train)), (n_train - 1.0) * xi);
}

OdeSolution agnostic_ode_solve(const AgnosticConfig& cfg, int grid_steps) {
    require_config(cfg, "agnostic_ode_solve");
    if (cfg.n_train < 1) throw std::invalid_argument("agnostic_ode_solve: n_train must be >= 1");
    if (cfg.alpha_abs_sq_control != cfg.alpha_abs_sq_true)
        throw std::invalid_argument(
            "agnostic_ode_solve: calibrated solve requires control == true amplitude "
            "(use propagate_with_control otherwise)");
    if (grid_steps < 100) throw std::invalid_argument("agnostic_ode_solve: grid_steps >= 100");

    const double a = cfg.alpha_abs_sq_true;
    const int n = cfg.n_train;
    const auto f = [a, n](double, double xi) { return a * xi_rate(xi, n); };

    OdeSolution sol;
    sol.times.reserve(grid_steps + 1);
    sol.pc.reserve(grid_steps + 1);
    sol.solver_steps = grid_steps;
    const double h = 1.0 / grid_steps;
    double xi = 0.0;
    sol.times.push_back(0.0);
    sol.pc.push_back(0.5);
    for (int i = 0; i < grid_steps; ++i) {
        xi = rk4_step(f, i * h, xi, h);
        sol.times.push_back((i + 1) * h);
        sol.pc.push_back(0.5 + xi);
    }
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        const double res =
            implicit_solution_residual(sol.pc[i] - 0.5, sol.times[i], a, n);
        sol.max_residual = std::max(sol.max_residual, std::fabs(res));
    }
    return sol;
}

double implicit_solution_residual(double xi, double t, double alpha_abs_sq, int n_train) {
    if (n_train < 1) throw std::invalid_argument("implicit_solution_residual: n_train >= 1");
    if (!(xi >= 0.0) || !(xi <= 0.5))
        throw std::invalid_argument("implicit_solution_residual: xi not in [0, 1/2]");
    if (!(t >= 0.0) || !(t <= 1.0))
        throw std::invalid_argument("implicit_solution_residual: t not in [0, 1]");
    if (!(alpha_abs_sq >= 0.0))
        throw std::invalid_argument("implicit_solution_residual: |alpha|^2 < 0");
    const double one_minus_4xi2 = (1.0 - 2.0 * xi) * (1.0 + 2.0 * xi);
    if (one_minus_4xi2 < 1e-300)
        throw std::domain_error("implicit_solution_residual: xi too close to 1/2");
    const double dn = n_train;
    const double r = std::sqrt((dn - 1.0) * (dn - 1.0) * xi * xi + dn);
    // (n+1) xi / r < 1 exactly when xi < 1/2; clamp so rounding at extreme
    // saturation cannot push the argument onto the branch point
    const double arg1 = std::min((dn - 1.0) * xi / r, 1.0 - 1e-16);
    const double arg2 = std::min((dn + 1.0) * xi / r, 1.0 - 1e-16);
    const double f = -((dn - 1.0) / (4.0 * dn)) * std::atanh(arg1) +
                     ((dn + 1.0) / (4.0 * dn)) * std::atanh(arg2) -
                     ((dn + 1.0) / (8.0 * dn)) * std::log(one_minus_4xi2);
    return alpha_abs_sq * t - f;
}

double invert_implicit(double t, double alpha_abs_sq, int n_train) {
    if (n_train < 1) throw std::invalid_argument("invert_implicit: n_train >= 1");
    if (!(t >= 0.0) || !(t <= 1.0)) throw std::invalid_argument("invert_implicit: t not in [0, 1]");
    if (!(alpha_abs_sq >= 0.0)) throw std::invalid_argument("invert_implicit: |alpha|^2 < 0");
    if (t == 0.0 || alpha_abs_sq == 0.0) return 0.0;

    // residual(0) = a t > 0 and residual -> -inf as xi -> 1/2; strictly
    // decreasing in xi, so plain bisection converges
    double lo = 0.0, hi = 0.5 - 1e-13;
    if (!(implicit_solution_residual(lo, t, alpha_abs_sq, n_train) >= 0.0) ||
        !(implicit_solution_residual(hi, t, alpha_abs_sq, n_train) <= 0.0))
        throw std::runtime_error("invert_implicit: root not bracketed");
    double mid = 0.0, res = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        res = implicit_solution_residual(mid, t, alpha_abs_sq, n_train);
        if (std::fabs(res) <= 1e-10) return mid;
        (res > 0.0 ? lo : hi) = mid;
    }
    return mid;
}

ControlTrajectory optimal_trajectory(double alpha_abs_sq_control, int n_train, int grid_points) {
    if (n_train < 1) throw std::invalid_argument("optimal_trajectory: n_train must be >= 1");
    if (!(alpha_abs_sq_control >= 0.0))
        throw std::invalid_argument("optimal_trajectory: |alpha|^2 < 0");
    if (grid_points < 2) throw std::invalid_argument("optimal_trajectory: grid_points >= 2");

    const double a = alpha_abs_sq_control;
    const int n = n_train;
    const auto f = [a, n](double, double xi) { return a * xi_rate(xi, n); };

    ControlTrajectory ct;
    ct.times.reserve(grid_points + 1);
    ct.theta.reserve(grid_points + 1);
    const double h = 1.0 / grid_points;
    double xi = 0.0;
    ct.times.push_back(0.0);
    ct.theta.push_back(optimal_control(0.0, n));
    for (int i = 0; i < grid_points; ++i) {
        xi = rk4_step(f, i * h, xi, h);
        ct.times.push_back((i + 1) * h);
        ct.theta.push_back(optimal_control(std::min(xi, 0.5 - 1e-15), n));
    }
    return ct;
}

OdeSolution propagate_with_control(const AgnosticConfig& cfg, const ControlTrajectory& control,
                                   int grid_steps) {
    require_config(cfg, "propagate_with_control");
    if (grid_steps < 100) throw std::invalid_argument("propagate_with_control: grid_steps >= 100");
    control.validate();

    const double a = cfg.alpha_abs_sq_true;
    const int n = cfg.n_train;
    const auto f = [a, n, &control](double t, double p) {
        const DolinarRates rt = agnostic_rates(control.theta_at(t), a, n);
        return rt.mu_t - (rt.lambda_t + rt.mu_t) * p;
    };

    OdeSolution sol;
    sol.times.reserve(grid_steps + 1);
    sol.pc.reserve(grid_steps + 1);
    sol.solver_steps = grid_steps;
    const double h = 1.0 / grid_steps;
    double p = 0.5;
    sol.times.push_back(0.0);
    sol.pc.push_back(p);
    for (int i = 0; i < grid_steps; ++i) {
        p = rk4_step(f, i * h, p, h);
        sol.times.push_back((i + 1) * h);
        sol.pc.push_back(p);
    }
    return sol;
}

}  // namespace agnodol
