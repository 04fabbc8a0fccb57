#include "agnodol/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "agnodol/math/bessel.hpp"
#include "agnodol/math/quadrature.hpp"

namespace agnodol {
namespace {

constexpr int kOdeSteps = 600;

// Terminal success of the receiver trained on n_rec copies whose schedule
// was built for a_hat while the source actually emits a_true.
double propagated_success(double a_true, double a_hat, int n_rec) {
    const ControlTrajectory control = optimal_trajectory(a_hat, n_rec, kOdeSteps);
    AgnosticConfig cfg;
    cfg.n_train = n_rec;
    cfg.alpha_abs_sq_true = a_true;
    cfg.alpha_abs_sq_control = a_hat;
    return propagate_with_control(cfg, control, kOdeSteps).pc.back();
}

}  // namespace

void SplitConfig::validate() const {
    if (n_total < 1) throw std::invalid_argument("SplitConfig: n_total must be positive");
    if (m_estimate < 0 || m_estimate >= n_total)
        throw std::invalid_argument("SplitConfig: need 0 <= m_estimate < n_total");
}

double photon_count_pmf(int k, int m, double alpha_abs_sq) {
    if (k < 0) throw std::invalid_argument("photon_count_pmf: k must be nonnegative");
    if (m < 1) throw std::invalid_argument("photon_count_pmf: m must be positive");
    if (alpha_abs_sq < 0.0) throw std::invalid_argument("photon_count_pmf: negative amplitude-square");
    const double mean = m * alpha_abs_sq;
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

double heterodyne_radial_pdf(double b_abs_sq, int m, double alpha_abs_sq) {
    if (b_abs_sq < 0.0) throw std::invalid_argument("heterodyne_radial_pdf: outcome must be nonnegative");
    if (m < 1) throw std::invalid_argument("heterodyne_radial_pdf: m must be positive");
    if (alpha_abs_sq < 0.0)
        throw std::invalid_argument("heterodyne_radial_pdf: negative amplitude-square");
    const double big_m = m * alpha_abs_sq;
    // exp(-(M+s)) I0(2 sqrt(M s)) = exp(-(sqrt(M)-sqrt(s))^2) i0_scaled(...)
    const double d = std::sqrt(big_m) - std::sqrt(b_abs_sq);
    return std::exp(-d * d) * i0_scaled(2.0 * std::sqrt(big_m * b_abs_sq));
}

double split_performance(Amplitude alpha, const SplitConfig& split, EstimatorKind est,
                         bool bias_corrected) {
    split.validate();
    const double a_true = abs_sq(alpha);
    const int n_rec = split.n_total - split.m_estimate;
    const int m = split.m_estimate;
    if (m == 0) return propagated_success(a_true, 0.0, n_rec);

    if (est == EstimatorKind::photon_counting) {
        const double mean = m * a_true;
        const int k_cap = 10 * static_cast<int>(mean) + 400;
        double total = 0.0;
        double mass = 0.0;
        double last = 0.5;
        for (int k = 0; k <= k_cap; ++k) {
            const double w = photon_count_pmf(k, m, a_true);
            last = propagated_success(a_true, static_cast<double>(k) / m, n_rec);
            total += w * last;
            mass += w;
            if (1.0 - mass < 1e-12 && k >= static_cast<int>(mean)) break;
        }
        return total + (1.0 - mass) * last;
    }

    // Heterodyne: s = |beta|^2 carries sub-Gaussian tails in sqrt(s), so
    // [0, (sqrt(M)+6)^2 + 1] holds all but ~1e-16 of the mass.
    const double big_m = m * a_true;
    const double u_max = std::sqrt(big_m) + 6.0;
    const double s_max = u_max * u_max + 1.0;
    auto integrand = [&](double s) {
        const double a_hat = bias_corrected ? std::max(s - 1.0, 0.0) / m : s / m;
        return heterodyne_radial_pdf(s, m, a_true) * propagated_success(a_true, a_hat, n_rec);
    };
    const QuadResult q =
        integrate_adaptive(integrand, {0.0, big_m + 1.0, s_max}, 1e-8, 1e-9, 2000);
    if (!q.converged)
        throw std::runtime_error("split_performance: heterodyne quadrature did not converge");
    return q.value;
}

int apriori_m(int n_total) {
    if (n_total < 2) throw std::invalid_argument("apriori_m: need n_total >= 2");
    if (n_total == 4) return 2;
    if (n_total == 8) return 3;
    const int rounded = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_total))));
    return std::clamp(rounded, 1, n_total - 1);
}

double rice_averaged_error(int n_total, const RicePrior& prior, EstimatorKind est) {
    if (n_total < 2) throw std::invalid_argument("rice_averaged_error: need n_total >= 2");
    SplitConfig split;
    split.n_total = n_total;
    split.m_estimate = apriori_m(n_total);
    auto integrand = [&](double x) {
        const double err = 1.0 - split_performance(Amplitude(x, 0.0), split, est);
        return prior.pdf(x) * err;
    };
    std::vector<double> breaks{0.0, std::max(0.0, prior.x_c - 10.0 * prior.sigma),
                               prior.upper_limit()};
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const QuadResult q = integrate_adaptive(integrand, breaks, 1e-7, 1e-8, 2000);
    if (!q.converged) throw std::runtime_error("rice_averaged_error: quadrature tolerance not met");
    return q.value;
}

}  // namespace agnodol
