#include "agnodol/telegraph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "agnodol/math/rng.hpp"

namespace agnodol {
namespace {

struct SliceTable {
    int slices = 0;
    double dt = 0.0;
    std::vector<double> p_lambda;  // click probability while the guess is correct
    std::vector<double> p_mu;      // click probability while it is wrong
};

// Samples rates at slice midpoints, re-slicing until rate * dt <= 0.05.
SliceTable build_slices(const RateFn& rates_for, int slices, double t_start) {
    if (slices < 1) throw std::invalid_argument("McConfig: slices must be positive");
    const double span = 1.0 - t_start;
    int k = slices;
    for (int pass = 0; pass < 40; ++pass) {
        const double dt = span / k;
        SliceTable table;
        table.slices = k;
        table.dt = dt;
        table.p_lambda.resize(k);
        table.p_mu.resize(k);
        double r_max = 0.0;
        for (int i = 0; i < k; ++i) {
            const DolinarRates r = rates_for(t_start + (i + 0.5) * dt);
            if (r.lambda_t < 0.0 || r.mu_t < 0.0)
                throw std::invalid_argument("simulate_receiver: negative rate");
            r_max = std::max(r_max, std::max(r.lambda_t, r.mu_t));
            table.p_lambda[i] = r.lambda_t * dt;
            table.p_mu[i] = r.mu_t * dt;
        }
        if (r_max * dt <= 0.05) return table;
        const double needed = r_max * span / 0.05;
        if (needed > 6.7e7)
            throw std::runtime_error(
                "simulate_receiver: rate * dt cap unreachable (divergent rates; start from "
                "t_start > 0 with p_correct_start)");
        k = std::max(k + 1, static_cast<int>(std::ceil(needed)));
    }
    throw std::runtime_error("simulate_receiver: slice refinement did not settle");
}

// matched tracks guess == truth; clicks swap it. Returns the success count.
long long run_chunk(const SliceTable& table, std::uint64_t seed, double p_plus,
                    double p_correct_start, long long begin, long long end) {
    const bool favourite_plus = p_plus >= 0.5;
    long long successes = 0;
    for (long long trial = begin; trial < end; ++trial) {
        Xoshiro256ss rng = Xoshiro256ss::for_stream(seed, static_cast<std::uint64_t>(trial));
        const bool truth_plus = rng.uniform() < p_plus;
        bool matched = p_correct_start >= 0.0 ? rng.uniform() < p_correct_start
                                              : truth_plus == favourite_plus;
        for (int i = 0; i < table.slices; ++i) {
            if (rng.uniform() < (matched ? table.p_lambda[i] : table.p_mu[i]))
                matched = !matched;
        }
        if (matched) ++successes;
    }
    return successes;
}

void validate_common(const McConfig& cfg, double p_plus, double t_start,
                     double p_correct_start) {
    if (cfg.trials < 1) throw std::invalid_argument("McConfig: trials must be positive");
    if (!(p_plus >= 0.0 && p_plus <= 1.0))
        throw std::invalid_argument("simulate_receiver: p_plus outside [0, 1]");
    if (!(t_start >= 0.0 && t_start < 1.0))
        throw std::invalid_argument("simulate_receiver: t_start outside [0, 1)");
    if (p_correct_start > 1.0)
        throw std::invalid_argument("simulate_receiver: p_correct_start above 1");
}

}  // namespace

McResult simulate_receiver(const RateFn& rates_for, const McConfig& cfg, double p_plus,
                           double t_start, double p_correct_start) {
    validate_common(cfg, p_plus, t_start, p_correct_start);
    const SliceTable table = build_slices(rates_for, cfg.slices, t_start);

    const unsigned hw = std::thread::hardware_concurrency();
    const long long want = hw == 0 ? 1 : static_cast<long long>(std::min(hw, 32u));
    const int n_threads = static_cast<int>(std::min<long long>(want, cfg.trials));
    const long long chunk = (cfg.trials + n_threads - 1) / n_threads;

    // Streams are keyed by the absolute trial index and reduced as integer
    // counts, so the partition (and thread count) cannot affect the result.
    std::vector<long long> counts(static_cast<std::size_t>(n_threads), 0);
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w) {
        const long long begin = w * chunk;
        const long long end = std::min<long long>(cfg.trials, begin + chunk);
        if (begin >= end) continue;
        pool.emplace_back([&table, &counts, &cfg, p_plus, p_correct_start, w, begin, end] {
            counts[static_cast<std::size_t>(w)] =
                run_chunk(table, cfg.seed, p_plus, p_correct_start, begin, end);
        });
    }
    for (auto& th : pool) th.join();

    long long successes = 0;
    for (const long long c : counts) successes += c;

    McResult out;
    out.trials = cfg.trials;
    out.success_rate = static_cast<double>(successes) / static_cast<double>(cfg.trials);
    out.std_error = std::sqrt(
        std::max(0.0, out.success_rate * (1.0 - out.success_rate)) /
        static_cast<double>(cfg.trials));
    out.slices_used = table.slices;
    return out;
}

McCheckpoints simulate_with_checkpoints(const RateFn& rates_for, const McConfig& cfg,
                                        double p_plus, const std::vector<double>& times) {
    validate_common(cfg, p_plus, 0.0, -1.0);
    if (times.empty()) throw std::invalid_argument("simulate_with_checkpoints: no times");
    const SliceTable table = build_slices(rates_for, cfg.slices, 0.0);

    // Snap each requested time to the nearest slice boundary.
    struct Mark {
        int slice;
        std::size_t position;
    };
    std::vector<Mark> marks;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (!(times[j] >= 0.0 && times[j] <= 1.0))
            throw std::invalid_argument("simulate_with_checkpoints: time outside [0, 1]");
        const int idx = static_cast<int>(std::lround(times[j] / table.dt));
        marks.push_back({std::clamp(idx, 0, table.slices), j});
    }
    std::sort(marks.begin(), marks.end(),
              [](const Mark& a, const Mark& b) { return a.slice < b.slice; });

    const bool favourite_plus = p_plus >= 0.5;
    std::vector<long long> counts(times.size(), 0);
    for (long long trial = 0; trial < cfg.trials; ++trial) {
        Xoshiro256ss rng = Xoshiro256ss::for_stream(cfg.seed, static_cast<std::uint64_t>(trial));
        const bool truth_plus = rng.uniform() < p_plus;
        bool matched = truth_plus == favourite_plus;
        std::size_t next_mark = 0;
        for (int i = 0; i <= table.slices; ++i) {
            while (next_mark < marks.size() && marks[next_mark].slice == i) {
                if (matched) ++counts[marks[next_mark].position];
                ++next_mark;
            }
            if (i == table.slices) break;
            if (rng.uniform() < (matched ? table.p_lambda[i] : table.p_mu[i]))
                matched = !matched;
        }
    }

    McCheckpoints out;
    out.times.resize(times.size());
    out.q_plus.resize(times.size());
    out.std_error.resize(times.size());
    for (const Mark& mark : marks) out.times[mark.position] = mark.slice * table.dt;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double q = static_cast<double>(counts[j]) / static_cast<double>(cfg.trials);
        out.q_plus[j] = q;
        out.std_error[j] = std::sqrt(std::max(0.0, q * (1.0 - q)) /
                                     static_cast<double>(cfg.trials));
    }
    return out;
}

double discretized_dolinar(int slices, Amplitude alpha, double p_plus) {
    if (slices < 10) throw std::invalid_argument("discretized_dolinar: need at least 10 slices");
    if (!(p_plus >= 0.0 && p_plus <= 1.0))
        throw std::invalid_argument("discretized_dolinar: p_plus outside [0, 1]");
    const double a = abs_sq(alpha);
    const double dt = 1.0 / slices;
    double c = std::max(p_plus, 1.0 - p_plus);
    for (int i = 0; i < slices; ++i) {
        const DolinarRates r = dolinar_optimal_rates(p_plus, a, (i + 0.5) * dt);
        const double f_lambda = 0.5 * -std::expm1(-2.0 * r.lambda_t * dt);
        const double f_mu = 0.5 * -std::expm1(-2.0 * r.mu_t * dt);
        c = c * (1.0 - f_lambda) + (1.0 - c) * f_mu;
    }
    return c;
}

}  // namespace agnodol
