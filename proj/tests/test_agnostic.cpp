#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "agnodol/agnostic.hpp"
#include "agnodol/bounds.hpp"
#include "agnodol/dolinar.hpp"

using namespace agnodol;

namespace {

// Growth rate of xi under angle theta: dxi/dt = -lambda (1/2 + xi)
// + mu (1/2 - xi). optimal_control must maximize this over theta.
double xi_rate(double theta, double xi, double a, int n) {
    const DolinarRates r = agnostic_rates(theta, a, n);
    return -r.lambda_t * (0.5 + xi) + r.mu_t * (0.5 - xi);
}

}  // namespace

TEST_CASE("splitter port rates at distinguished angles") {
    const double a = 0.25;
    // theta = 0: training beam decoupled, both ports see the bare state
    for (int n : {1, 4, 9}) {
        const DolinarRates r = agnostic_rates(0.0, a, n);
        CHECK(r.lambda_t == doctest::Approx(a).epsilon(1e-15));
        CHECK(r.mu_t == doctest::Approx(a).epsilon(1e-15));
    }
    // tan(theta) = 1/sqrt(n) nulls the matched port
    for (int n : {1, 2, 5, 16}) {
        CAPTURE(n);
        const double th = std::atan(1.0 / std::sqrt(static_cast<double>(n)));
        const DolinarRates r = agnostic_rates(th, a, n);
        CHECK(r.lambda_t == doctest::Approx(0.0));
        CHECK(r.mu_t ==
              doctest::Approx(4.0 * a * n / (n + 1.0)).epsilon(1e-13));
    }
    // n = 1, theta = pi/4: (cos + sin)^2 = 2
    const DolinarRates r = agnostic_rates(std::acos(-1.0) / 4.0, a, 1);
    CHECK(r.mu_t == doctest::Approx(2.0 * a).epsilon(1e-14));
    CHECK_THROWS_AS(agnostic_rates(-0.1, a, 1), std::invalid_argument);
    CHECK_THROWS_AS(agnostic_rates(2.0, a, 1), std::invalid_argument);
}

TEST_CASE("optimal angle maximizes the confidence growth rate") {
    const double pi = std::acos(-1.0);
    CHECK(optimal_control(0.0, 5) == doctest::Approx(pi / 4.0).epsilon(1e-15));
    CHECK(optimal_control(0.3, 1) == doctest::Approx(pi / 4.0).epsilon(1e-15));
    // brute-force grid maximization of the growth rate
    for (int n : {2, 4, 16}) {
        for (double xi : {0.05, 0.2, 0.45}) {
            CAPTURE(n);
            CAPTURE(xi);
            const double a = 0.25;
            double best_th = 0.0, best = -1e300;
            for (int i = 0; i <= 40000; ++i) {
                const double th = pi / 2.0 * i / 40000.0;
                const double v = xi_rate(th, xi, a, n);
                if (v > best) {
                    best = v;
                    best_th = th;
                }
            }
            CHECK(std::fabs(optimal_control(xi, n) - best_th) < 2e-3);
            // rationalized rate identity at the optimum
            const double r = std::sqrt((n - 1.0) * (n - 1.0) * xi * xi + n);
            const double rate = a * n * (1.0 - 4.0 * xi * xi) / (r + xi * (n + 1.0));
            CHECK(xi_rate(optimal_control(xi, n), xi, a, n) ==
                  doctest::Approx(rate).epsilon(1e-12));
        }
    }
}

TEST_CASE("confidence ODE: single-copy closed form") {
    // n = 1 keeps theta = pi/4 and xi(t) = (1 - e^{-2at}) / 2
    const double a = 0.390625;
    const AgnosticConfig cfg{1, a, a};
    const OdeSolution sol = agnostic_ode_solve(cfg, 2000);
    for (std::size_t i = 0; i < sol.times.size(); i += 100) {
        const double xi = 0.5 * (-std::expm1(-2.0 * a * sol.times[i]));
        CHECK(std::fabs((sol.pc[i] - 0.5) - xi) < 1e-10);
    }
    CHECK(sol.max_residual < 1e-8);
}

TEST_CASE("confidence ODE satisfies the implicit relation everywhere") {
    for (int n : {1, 2, 4, 8, 16}) {
        for (double a : {0.0625, 0.25, 0.390625, 1.0, 2.0}) {
            CAPTURE(n);
            CAPTURE(a);
            const AgnosticConfig cfg{n, a, a};
            const OdeSolution sol = agnostic_ode_solve(cfg, 2000);
            CHECK(sol.max_residual < 1e-8);
            // terminal point triple-checked by direct bisection
            CHECK(std::fabs((sol.pc.back() - 0.5) - invert_implicit(1.0, a, n)) < 1e-6);
            // sandwich: never below chance, never above the n = infinity limit
            for (double pc : sol.pc) {
                CHECK(pc >= 0.5);
                CHECK(pc <= dolinar_success(0.5, 0.5, a, 1.0) + 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(agnostic_ode_solve(AgnosticConfig{0, 0.25, 0.25}, 100),
                    std::invalid_argument);
    // solver requires a calibrated config; mismatch goes via propagate_with_control
    CHECK_THROWS_AS(agnostic_ode_solve(AgnosticConfig{2, 0.25, 0.3}, 100),
                    std::invalid_argument);
}

TEST_CASE("zero amplitude leaves the confidence flat") {
    const OdeSolution sol = agnostic_ode_solve(AgnosticConfig{3, 0.0, 0.0}, 200);
    for (double pc : sol.pc) CHECK(pc == doctest::Approx(0.5));
}

TEST_CASE("implicit relation: residual shape and inversion") {
    const double a = 0.25;
    const int n = 4;
    const double xi_root = invert_implicit(1.0, a, n);
    CHECK(std::fabs(implicit_solution_residual(xi_root, 1.0, a, n)) <= 1e-10);
    // strictly decreasing in xi past the root
    double prev = implicit_solution_residual(xi_root, 1.0, a, n);
    for (double xi = xi_root + 0.01; xi < 0.5 - 1e-6; xi += 0.03) {
        const double res = implicit_solution_residual(xi, 1.0, a, n);
        CHECK(res < prev);
        prev = res;
    }
    // a t beyond the antiderivative's reach cannot be bracketed
    CHECK_THROWS_AS(invert_implicit(1.0, 20.0, 1), std::runtime_error);
}

TEST_CASE("many training copies approach the known-amplitude receiver") {
    const double a = 0.25;
    const AgnosticConfig cfg{1000000, a, a};
    const OdeSolution sol = agnostic_ode_solve(cfg, 20000);
    CHECK(std::fabs(sol.pc.back() - dolinar_success(0.5, 0.5, a, 1.0)) < 1e-4);
}

TEST_CASE("terminal success is non-decreasing in the training count") {
    const double a = 0.390625;
    double prev = 0.5;
    for (int n : {1, 2, 4, 8, 16, 32}) {
        CAPTURE(n);
        const double pc = agnostic_ode_solve(AgnosticConfig{n, a, a}, 2000).pc.back();
        CHECK(pc >= prev - 1e-12);
        prev = pc;
    }
}

TEST_CASE("schedule objects validate their invariants") {
    const ControlTrajectory good = optimal_trajectory(0.25, 4, 500);
    CHECK_NOTHROW(good.validate());
    CHECK(good.times.size() == 501);
    // clamped interpolation outside the grid
    CHECK(good.theta_at(-1.0) == doctest::Approx(good.theta.front()));
    CHECK(good.theta_at(2.0) == doctest::Approx(good.theta.back()));

    ControlTrajectory bad = good;
    bad.times[3] = bad.times[5];  // non-increasing grid
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    ControlTrajectory range = good;
    range.theta[10] = 1.8;  // outside [0, pi/2]
    CHECK_THROWS_AS(range.validate(), std::invalid_argument);

    ControlTrajectory jumpy = good;
    jumpy.theta[20] = jumpy.theta[19] + 1.0;  // jump > pi/4
    CHECK_THROWS_AS(jumpy.validate(), std::invalid_argument);
}

TEST_CASE("propagation under the calibrated schedule matches the direct solve") {
    for (int n : {1, 4, 16}) {
        for (double a : {0.25, 1.0}) {
            CAPTURE(n);
            CAPTURE(a);
            const AgnosticConfig cfg{n, a, a};
            const ControlTrajectory ctl = optimal_trajectory(a, n, 4000);
            const OdeSolution via_ctl = propagate_with_control(cfg, ctl, 4000);
            const OdeSolution direct = agnostic_ode_solve(cfg, 4000);
            CHECK(std::fabs(via_ctl.pc.back() - direct.pc.back()) < 1e-8);
        }
    }
}

TEST_CASE("the optimal schedule is a strict local maximum") {
    const double a = 0.390625;
    const int n = 4;
    const AgnosticConfig cfg{n, a, a};
    const double calibrated = agnostic_ode_solve(cfg, 4000).pc.back();
    double prev_gap = 0.0;
    for (int k : {1, 2, 3}) {
        CAPTURE(k);
        ControlTrajectory ctl = optimal_trajectory(a, n, 4000);
        for (double& th : ctl.theta) th += 0.01 * k;
        const double perturbed = propagate_with_control(cfg, ctl, 4000).pc.back();
        const double gap = calibrated - perturbed;
        CHECK(gap > 0.0);
        CHECK(gap > prev_gap);
        prev_gap = gap;
    }
    // constant pi/4 schedule is exactly optimal only for n = 1
    ControlTrajectory flat;
    flat.times = {0.0, 1.0};
    flat.theta = {std::acos(-1.0) / 4.0, std::acos(-1.0) / 4.0};
    const AgnosticConfig one{1, a, a};
    CHECK(std::fabs(propagate_with_control(one, flat, 4000).pc.back() -
                    agnostic_ode_solve(one, 4000).pc.back()) < 1e-9);
}

TEST_CASE("miscalibrated control underperforms") {
    const double a = 0.25;
    const int n = 4;
    const AgnosticConfig cfg{n, a, 2.0 * a};
    const ControlTrajectory wrong = optimal_trajectory(2.0 * a, n, 4000);
    const double mis = propagate_with_control(cfg, wrong, 4000).pc.back();
    const double calibrated = agnostic_ode_solve(AgnosticConfig{n, a, a}, 4000).pc.back();
    CHECK(mis < calibrated);
    CHECK(mis > 0.5);
}
