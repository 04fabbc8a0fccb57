#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "agnodol/dolinar.hpp"
#include "agnodol/optics.hpp"

namespace agnodol {

// Port click rates (lambda = guess currently correct, mu = incorrect) as a
// function of time; the engine applies the guess-dependence itself.
using RateFn = std::function<DolinarRates(double)>;

struct McConfig {
    long long trials = 100000;
    int slices = 2000;
    std::uint64_t seed = 1;
};

struct McResult {
    double success_rate = 0.0;
    long long trials = 0;
    double std_error = 0.0;
    // slice count after enforcing rate * dt <= 0.05 on every slice
    int slices_used = 0;
};

struct McCheckpoints {
    // requested times snapped to slice boundaries
    std::vector<double> times;
    std::vector<double> q_plus;
    std::vector<double> std_error;
};

// Telegraph-process Monte Carlo of a feedback receiver: per trial the true
// class is drawn with p_plus, the guess starts on the a-priori favourite,
// each time slice clicks with probability rate * dt (rate sampled at the
// slice midpoint; lambda while the guess is correct, mu otherwise) and every
// click flips the guess; success means guessing right at t = 1. Slices are
// auto-increased until rate * dt <= 0.05 everywhere. Trials use independent
// counter-derived streams and a fixed-order integer reduction, so results
// are bit-identical for a given (seed, trials) regardless of thread count.
//
// For rate schedules divergent at t = 0 (flat-prior classic Dolinar) pass
// t_start > 0 plus p_correct_start, the exact probability that the guess is
// correct at t_start; the simulation then covers [t_start, 1]. The process
// is Markov, so seeding the guess from the marginal is exact.
McResult simulate_receiver(const RateFn& rates_for, const McConfig& cfg, double p_plus,
                           double t_start = 0.0, double p_correct_start = -1.0);

// Same dynamics, recording the fraction of trials whose guess is correct at
// each requested time (the q_plus component of the telegraph marginal; the
// companion q_minus is its complement).
McCheckpoints simulate_with_checkpoints(const RateFn& rates_for, const McConfig& cfg,
                                        double p_plus, const std::vector<double>& times);

// Deterministic success probability of the slice-chain receiver: per slice
// the tapped beam is displaced by the optimal control frozen at the slice
// midpoint and photon-counted, and the guess flips on odd counts. The count
// is Poisson at fixed mean within a slice, so the flip probability is the
// exact parity (1 - exp(-2 nu)) / 2 with nu = rate * dt; the two-state
// recursion c' = c (1 - f_lambda) + (1 - c) f_mu starts from max(p+, p-).
// Converges to the continuous receiver (hence Helstrom) as slices grow.
double discretized_dolinar(int slices, Amplitude alpha, double p_plus);

}  // namespace agnodol
