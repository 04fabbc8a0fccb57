#pragma once

#include <vector>

#include "agnodol/optics.hpp"

namespace agnodol {

// Poisson photon-number distribution p(m) = e^{-mu} mu^m / m!, truncated
// once both p(m) < 1e-15 and the accumulated mass is >= 1 - 1e-12 (hard cap
// m <= max(50, 10*mu)). mean_sq is mu, an |amplitude|^2 quantity.
struct PoissonWeights {
    double mean_sq = 0.0;
    std::vector<double> weights;
    double tail_bound = 0.0;  // mass beyond the truncation, <= 1e-12
};

PoissonWeights poisson_weights(double mean_sq);

// Rice prior over the radial amplitude |alpha|:
// p(r) = (r/sigma^2) exp(-(r^2+x_c^2)/(2 sigma^2)) I0(r x_c / sigma^2).
// x_c = 0 reduces to Rayleigh; sigma -> 0 approaches a point mass at x_c.
struct RicePrior {
    double sigma = 0.1;
    double x_c = 0.0;

    double pdf(double r) const;
    // Integration window [0, x_c + 10 sigma] carries all but ~1e-12 mass.
    double upper_limit() const { return x_c + 10.0 * sigma; }
};

// Total-photon-number sector m of |sqrt(n) alpha> (x) |+-alpha> for real
// alpha: unit vectors over n1 = photons in the training mode,
// c(n1) ~ sqrt(C(m,n1)) n^{n1/2} (+-1)^{m-n1}. Their overlap is
// ((n-1)/(n+1))^m independently of alpha.
struct FockSector {
    int m = 0;
    std::vector<double> plus;
    std::vector<double> minus;

    double norm_plus() const;
    double norm_minus() const;
    double overlap() const;
};

FockSector fock_sector(int n, int m);

// Optimal discrimination of |a1> vs |a2> with priors (p1, p2):
// P_succ = (1 + sqrt(1 - 4 p1 p2 e^{-|a1-a2|^2})) / 2.
double helstrom_success(double p1, double p2, const Amplitude& a1, const Amplitude& a2);

// Flat-prior +-alpha special case of the error, 0.5*(1 - sqrt(1 - e^{-4 a}))
// with a = |alpha|^2.
double helstrom_error_symmetric(double alpha_abs_sq);

// Phase-invariant optimal classification error with n training copies:
//   P_e(n, a) = 0.5 * (1 - sum_m p(m; (n+1)a) sqrt(1 - q^{2m})),
// q = (n-1)/(n+1). n -> infinity recovers the Helstrom error; n = 1 gives
// 0.5 e^{-2a}. paper_literal keeps a historical inner factor 1/2 on the sum
// (whose n -> infinity limit is 0.25 + Helstrom/2 instead).
double mec_optimal_error(int n, double alpha_abs_sq, bool paper_literal = false);

// Large-n expansion: Helstrom error + a e^{-4a} / (n (1-e^{-4a})^{3/2}).
// Requires n >= 2 and alpha != 0.
double mec_optimal_error_asymptotic(int n, double alpha_abs_sq, bool paper_literal = false);

// Average of mec_optimal_error(n, r^2) over a Rice prior on r, by adaptive
// quadrature on [0, x_c + 10 sigma] seeded with a breakpoint at the density
// peak so that near-point-mass priors (tiny sigma) are not stepped over.
double mec_optimal_error_with_prior(int n, const RicePrior& prior, bool paper_literal = false);

// Independent check of the series: per-sector trace-norm contributions
// T_m = p(m; (n+1)a) * (|l1| + |l2|), with l1, l2 the eigenvalues of the
// rank-2 operator p(m)(P+ - P-) computed from the explicit sector vectors
// (numerical overlap, 2x2 eigenproblem; no use of the closed-form q).
// 0.5 * (1 - 0.5 * sum_m T_m) must reproduce mec_optimal_error.
std::vector<double> sector_trace_norm_oracle(int n, const Amplitude& alpha, int m_max);

}  // namespace agnodol
