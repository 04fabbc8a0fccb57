#pragma once

#include "agnodol/agnostic.hpp"
#include "agnodol/bounds.hpp"
#include "agnodol/optics.hpp"

namespace agnodol {

enum class EstimatorKind { photon_counting, heterodyne };

// n_total copies, m_estimate of them spent on estimating |alpha|^2; the
// remaining n_total - m_estimate (at least one) train the receiver.
struct SplitConfig {
    int n_total = 2;
    int m_estimate = 1;

    // 0 <= m_estimate < n_total
    void validate() const;
};

// Poisson pmf at k for photon counting on the concentrated block
// |sqrt(m) alpha>, mean m |alpha|^2; the associated estimate is k / m.
double photon_count_pmf(int k, int m, double alpha_abs_sq);

// Density in s = |beta|^2 of a heterodyne outcome beta on |sqrt(m) alpha>:
// f(s) = exp(-(M + s)) I0(2 sqrt(M s)), M = m |alpha|^2, evaluated in the
// overflow-free scaled form; the associated estimate is s / m.
double heterodyne_radial_pdf(double b_abs_sq, int m, double alpha_abs_sq);

// Expected terminal success probability of the estimate-then-receive
// strategy: measure the concentrated m-copy block once, build the optimal
// schedule for the estimated amplitude-square, run the receiver trained on
// the remaining n - m copies at the true amplitude, and average over
// outcomes (pmf sum for photon counting, truncated once the remaining mass
// drops below 1e-12 with the remainder folded onto the last value; adaptive
// radial-pdf quadrature for heterodyne). m_estimate = 0 degenerates to the
// uninformed estimate 0, i.e. a constant pi/4 schedule. bias_corrected
// switches the heterodyne estimate from s/m to max(s - 1, 0)/m, removing
// the one-photon vacuum offset.
double split_performance(Amplitude alpha, const SplitConfig& split, EstimatorKind est,
                         bool bias_corrected = false);

// Copy budget spent on estimation: 2 at n = 4 and 3 at n = 8 (reference
// operating points); round(sqrt(n)) clamped to [1, n-1] elsewhere.
int apriori_m(int n_total);

// Expected error 1 - success of the split strategy averaged over a Rice
// prior on |alpha|, with m chosen by apriori_m(n_total).
double rice_averaged_error(int n_total, const RicePrior& prior, EstimatorKind est);

}  // namespace agnodol
