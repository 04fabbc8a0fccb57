#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "agnodol/bounds.hpp"
#include "agnodol/dolinar.hpp"
#include "agnodol/math/bessel.hpp"
#include "agnodol/math/quadrature.hpp"

using namespace agnodol;

namespace {

// Independent check for eande_success: for flat priors the average over the
// isotropic Gaussian estimate collapses to a radial integral,
//   P = 1/2 + 2 n alpha Int_0^inf rho^2 K(rho^2) e^{-n (rho-alpha)^2}
//                       i1_scaled(2 n alpha rho) d rho,
// K(b) = (1 - e^{-2(a+b)}) / ((a+b) sqrt(1 - e^{-4b})), a = alpha^2.
double eande_radial_oracle(double alpha, int n) {
    const double a = alpha * alpha;
    const double dn = static_cast<double>(n);
    auto kernel = [a](double b) {
        return -std::expm1(-2.0 * (a + b)) / ((a + b) * std::sqrt(-std::expm1(-4.0 * b)));
    };
    auto integrand = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        const double d = rho - alpha;
        return rho * rho * kernel(rho * rho) * std::exp(-dn * d * d) *
               i1_scaled(2.0 * dn * alpha * rho);
    };
    const std::vector<double> breaks{0.0, alpha, alpha + 8.0 / std::sqrt(dn)};
    const QuadResult q = integrate_adaptive(integrand, breaks, 1e-12, 1e-14, 4000);
    REQUIRE(q.converged);
    return 0.5 + 2.0 * dn * alpha * q.value;
}

}  // namespace

TEST_CASE("calibrated receiver attains the Helstrom success at t = 1") {
    for (double al : {0.1, 0.25, 0.625, 1.0, 2.0}) {
        CAPTURE(al);
        const double a = al * al;
        CHECK(dolinar_success(0.5, 0.5, a, 1.0) ==
              doctest::Approx(helstrom_success(0.5, 0.5, Amplitude(al, 0.0), Amplitude(-al, 0.0)))
                  .epsilon(1e-12));
    }
    CHECK(dolinar_success(0.5, 0.5, 0.390625, 1.0) ==
          doctest::Approx(0.94451901333039236418).epsilon(1e-14));
    // asymmetric priors
    CHECK(dolinar_success(0.7, 0.3, 0.25, 1.0) ==
          doctest::Approx(helstrom_success(0.7, 0.3, Amplitude(0.5, 0.0), Amplitude(-0.5, 0.0)))
              .epsilon(1e-12));
    // t = 0: no signal seen yet, best guess is the prior
    CHECK(dolinar_success(0.7, 0.3, 0.25, 0.0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_THROWS_AS(dolinar_success(0.7, 0.7, 0.25, 1.0), std::invalid_argument);
}

TEST_CASE("optimal click rates satisfy the closed-form identities") {
    for (double p : {0.55, 0.7, 0.9}) {
        for (double a : {0.0625, 0.25, 1.0}) {
            for (double t : {0.1, 0.5, 1.0}) {
                CAPTURE(p);
                CAPTURE(a);
                CAPTURE(t);
                const DolinarRates r = dolinar_optimal_rates(p, a, t);
                const double pc = dolinar_success(p, 1.0 - p, a, t);
                const double d = (2.0 * pc - 1.0) * (2.0 * pc - 1.0);
                CHECK(r.lambda_t >= 0.0);
                CHECK(r.mu_t >= 0.0);
                CHECK(r.mu_t - r.lambda_t ==
                      doctest::Approx(4.0 * a / (2.0 * pc - 1.0)).epsilon(1e-11));
                CHECK(std::sqrt(r.lambda_t * r.mu_t) ==
                      doctest::Approx(4.0 * a * pc * (1.0 - pc) / d).epsilon(1e-10));
            }
        }
    }
    // a = 0: dark receiver never clicks
    const DolinarRates dark = dolinar_optimal_rates(0.7, 0.0, 0.5);
    CHECK(dark.lambda_t == 0.0);
    CHECK(dark.mu_t == 0.0);
}

TEST_CASE("success ODE reproduces the closed form") {
    for (double p : {0.5, 0.7}) {
        for (double a : {0.0625, 0.25, 0.390625, 1.0}) {
            CAPTURE(p);
            CAPTURE(a);
            const OdeSolution sol = dolinar_ode_solve(p, a, 10000);
            CHECK(sol.max_residual < 1e-6);
            CHECK(std::fabs(sol.pc.back() - dolinar_success(p, 1.0 - p, a, 1.0)) < 1e-6);
            // flat priors bootstrap at t0 = 1e-6 (divergent control at 1/2)
            CHECK(sol.times.front() <= 1e-6);
            CHECK(sol.times.back() == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
    CHECK_THROWS_AS(dolinar_ode_solve(0.5, 0.25, 0), std::invalid_argument);
}

TEST_CASE("success ODE converges at fourth order") {
    // sqrt(t) grading keeps RK4's global O(h^4); halving the step should
    // shrink the terminal error ~16x until roundoff (ratio window [8, 40]).
    for (double p : {0.5, 0.7}) {
        CAPTURE(p);
        const double a = 0.390625;
        const double exact = dolinar_success(p, 1.0 - p, a, 1.0);
        const double e250 = std::fabs(dolinar_ode_solve(p, a, 250).pc.back() - exact);
        const double e500 = std::fabs(dolinar_ode_solve(p, a, 500).pc.back() - exact);
        const double e1000 = std::fabs(dolinar_ode_solve(p, a, 1000).pc.back() - exact);
        CAPTURE(e250);
        CAPTURE(e500);
        CAPTURE(e1000);
        CHECK(e250 / e500 > 8.0);
        CHECK(e250 / e500 < 40.0);
        CHECK(e500 / e1000 > 8.0);
        CHECK(e500 / e1000 < 40.0);
    }
}

TEST_CASE("miscalibrated receiver closed form") {
    // beta = alpha recovers the calibrated (Helstrom) success
    for (double al : {0.1, 0.25, 0.625, 1.0}) {
        CAPTURE(al);
        const Amplitude z(al, 0.0);
        CHECK(miscalibrated_success(z, z) ==
              doctest::Approx(helstrom_success(0.5, 0.5, z, -z)).epsilon(1e-13));
        // anti-calibrated receiver guesses backwards with the same confidence
        CHECK(miscalibrated_success(-z, z) ==
              doctest::Approx(1.0 - helstrom_success(0.5, 0.5, z, -z)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(miscalibrated_success(Amplitude(0, 0), Amplitude(1, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(miscalibrated_success(Amplitude(1, 0), Amplitude(0, 0)),
                    std::invalid_argument);
}

TEST_CASE("miscalibrated closed form matches direct propagation") {
    const Amplitude pairs[][2] = {
        {Amplitude(0.3, 0.0), Amplitude(0.5, 0.0)},   {Amplitude(0.8, 0.0), Amplitude(0.5, 0.0)},
        {Amplitude(0.5, 0.2), Amplitude(0.5, 0.0)},   {Amplitude(0.2, -0.6), Amplitude(0.7, 0.1)},
        {Amplitude(1.2, 0.4), Amplitude(0.25, 0.0)},  {Amplitude(0.1, 0.0), Amplitude(1.0, 0.5)},
        {Amplitude(-0.4, 0.3), Amplitude(0.6, -0.2)}, {Amplitude(0.9, 0.9), Amplitude(0.9, 0.9)},
    };
    for (const auto& pr : pairs) {
        CAPTURE(pr[0].real());
        CAPTURE(pr[0].imag());
        CAPTURE(pr[1].real());
        CAPTURE(pr[1].imag());
        const double closed = miscalibrated_success(pr[0], pr[1]);
        const double propagated = miscalibrated_success_propagated(pr[0], pr[1], 20000);
        CHECK(std::fabs(closed - propagated) < 1e-10);
    }
}

TEST_CASE("miscalibration never beats the calibrated receiver") {
    for (double al : {0.1, 0.5, 1.0}) {
        const Amplitude alpha(al, 0.0);
        const double hel = helstrom_success(0.5, 0.5, alpha, -alpha);
        for (double be = 0.05; be <= 2.0; be += 0.065) {
            CAPTURE(al);
            CAPTURE(be);
            CHECK(miscalibrated_success(Amplitude(be, 0.0), alpha) <= hel + 1e-12);
        }
    }
}

TEST_CASE("Estimate&Discriminate average success") {
    // prototype-frozen 64-node tensor Gauss-Hermite values
    CHECK(eande_success(Amplitude(0.25, 0.0), 5) ==
          doctest::Approx(0.605708920342498).epsilon(1e-11));
    CHECK(eande_success(Amplitude(0.625, 0.0), 5) ==
          doctest::Approx(0.864530824761501).epsilon(1e-11));
    CHECK(eande_success(Amplitude(1.0, 0.0), 5) ==
          doctest::Approx(0.955462890788012).epsilon(1e-11));
    CHECK(eande_success(Amplitude(0.25, 0.0), 1) ==
          doctest::Approx(0.542176849387947).epsilon(1e-11));
    // alpha = 0: the estimate carries no signal and neither does the state
    CHECK(eande_success(Amplitude(0.0, 0.0), 5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(eande_success(Amplitude(0.5, 0.0), 0), std::invalid_argument);
}

TEST_CASE("Estimate&Discriminate agrees with the radial reduction") {
    // The oracle integrates the same average in polar form with a Bessel
    // kernel. The GH grid sees the |beta| = 0 kink, so accuracy improves
    // with alpha sqrt(n).
    for (double al : {0.25, 0.625, 1.0}) {
        for (int n : {1, 5, 16}) {
            CAPTURE(al);
            CAPTURE(n);
            const double gh = eande_success(Amplitude(al, 0.0), n);
            const double radial = eande_radial_oracle(al, n);
            CHECK(std::fabs(gh - radial) < 2e-3);
        }
    }
    CHECK(std::fabs(eande_success(Amplitude(1.0, 0.0), 16) - eande_radial_oracle(1.0, 16)) < 1e-5);
}

TEST_CASE("Estimate&Discriminate improves with more copies") {
    double prev = 0.5;
    for (int n : {1, 2, 4, 8, 16, 32}) {
        CAPTURE(n);
        const double pc = eande_radial_oracle(0.625, n);
        CHECK(pc > prev);
        prev = pc;
    }
}

TEST_CASE("quadrature-doubling self check flags the non-smooth regime") {
    const EandeResult weak = eande_success_checked(Amplitude(0.25, 0.0), 5);
    CHECK(weak.success == doctest::Approx(0.605708920342498).epsilon(1e-11));
    CHECK(weak.flagged);  // kink at beta = 0 still visible at alpha sqrt(n) ~ 0.56
    const EandeResult strong = eande_success_checked(Amplitude(1.0, 0.0), 16);
    CHECK(!strong.flagged);
    CHECK(strong.doubling_delta < 1e-8);
}
