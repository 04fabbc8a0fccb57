#include "agnodol/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agnodol/math/bessel.hpp"
#include "agnodol/math/quadrature.hpp"

namespace agnodol {

namespace {

double log_poisson_pmf(int m, double mu) {
    return m * std::log(mu) - mu - std::lgamma(m + 1.0);
}

double paper_literal_map(double consistent_error) {
    // inner factor 1/2 on the sector sum: P = 0.25 + P_consistent / 2
    return 0.25 + 0.5 * consistent_error;
}

}  // namespace

PoissonWeights poisson_weights(double mean_sq) {
    if (!(mean_sq >= 0.0) || !std::isfinite(mean_sq))
        throw std::invalid_argument("poisson_weights: mean_sq must be finite and >= 0");
    PoissonWeights out;
    out.mean_sq = mean_sq;
    if (mean_sq == 0.0) {
        out.weights = {1.0};
        out.tail_bound = 0.0;
        return out;
    }
    const int m_cap = static_cast<int>(std::max(50.0, std::ceil(10.0 * mean_sq)));
    double cumulative = 0.0;
    for (int m = 0; m <= m_cap; ++m) {
        const double w = std::exp(log_poisson_pmf(m, mean_sq));
        out.weights.push_back(w);
        cumulative += w;
        if (w < 1e-15 && cumulative >= 1.0 - 1e-12 && m > mean_sq) break;
    }
    out.tail_bound = std::max(0.0, 1.0 - cumulative);
    if (out.tail_bound > 1e-12)
        throw std::runtime_error("poisson_weights: truncation cap left tail mass > 1e-12");
    return out;
}

double RicePrior::pdf(double r) const {
    if (!(sigma > 0.0)) throw std::invalid_argument("RicePrior: sigma must be > 0");
    if (!(x_c >= 0.0)) throw std::invalid_argument("RicePrior: x_c must be >= 0");
    if (r < 0.0) return 0.0;
    const double s2 = sigma * sigma;
    // e^{-(r^2+xc^2)/(2s2)} I0(r xc/s2) = e^{-(r-xc)^2/(2s2)} i0e(r xc/s2)
    return (r / s2) * std::exp(-0.5 * (r - x_c) * (r - x_c) / s2) * i0_scaled(r * x_c / s2);
}

FockSector fock_sector(int n, int m) {
    if (n < 1) throw std::invalid_argument("fock_sector: n must be >= 1");
    if (m < 0) throw std::invalid_argument("fock_sector: m must be >= 0");
    FockSector out;
    out.m = m;
    out.plus.assign(m + 1, 0.0);
    out.minus.assign(m + 1, 0.0);
    const double log_n = std::log(static_cast<double>(n));
    const double log_np1 = std::log(n + 1.0);
    const double log_cm0 = std::lgamma(m + 1.0);
    for (int n1 = 0; n1 <= m; ++n1) {
        const double log_choose = log_cm0 - std::lgamma(n1 + 1.0) - std::lgamma(m - n1 + 1.0);
        const double c = std::exp(0.5 * (log_choose + n1 * log_n - m * log_np1));
        out.plus[n1] = c;
        out.minus[n1] = ((m - n1) % 2 == 0) ? c : -c;
    }
    return out;
}

double FockSector::norm_plus() const {
    double s = 0.0;
    for (double c : plus) s += c * c;
    return std::sqrt(s);
}

double FockSector::norm_minus() const {
    double s = 0.0;
    for (double c : minus) s += c * c;
    return std::sqrt(s);
}

double FockSector::overlap() const {
    double s = 0.0;
    for (std::size_t i = 0; i < plus.size(); ++i) s += plus[i] * minus[i];
    return s;
}

double helstrom_success(double p1, double p2, const Amplitude& a1, const Amplitude& a2) {
    if (!(p1 >= 0.0) || !(p2 >= 0.0) || std::fabs(p1 + p2 - 1.0) > 1e-12)
        throw std::invalid_argument("helstrom_success: priors must be >= 0 and sum to 1");
    const double ov = overlap_modulus_sq(a1, a2);
    return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * p1 * p2 * ov));
}

double helstrom_error_symmetric(double alpha_abs_sq) {
    if (!(alpha_abs_sq >= 0.0))
        throw std::invalid_argument("helstrom_error_symmetric: |alpha|^2 must be >= 0");
    // 1 - 0.5 (1 + sqrt(1 - e^{-4a})), written to avoid cancellation
    return 0.5 * (1.0 - std::sqrt(-std::expm1(-4.0 * alpha_abs_sq)));
}

double mec_optimal_error(int n, double alpha_abs_sq, bool paper_literal) {
    if (n < 1) throw std::invalid_argument("mec_optimal_error: n must be >= 1");
    if (!(alpha_abs_sq >= 0.0))
        throw std::invalid_argument("mec_optimal_error: |alpha|^2 must be >= 0");
    const PoissonWeights pw = poisson_weights((n + 1.0) * alpha_abs_sq);
    // log q = log((n-1)/(n+1)); -inf at n = 1, where every m >= 1 sector is
    // perfectly distinguishable
    const double log_q = std::log1p(-2.0 / (n + 1.0));
    double sum = 0.0;
    for (std::size_t m = 1; m < pw.weights.size(); ++m) {
        const double q2m = (n == 1) ? 0.0 : std::exp(2.0 * static_cast<double>(m) * log_q);
        sum += pw.weights[m] * std::sqrt(1.0 - q2m);
    }
    const double err = 0.5 * (1.0 - sum);
    return paper_literal ? paper_literal_map(err) : err;
}

double mec_optimal_error_asymptotic(int n, double alpha_abs_sq, bool paper_literal) {
    if (n < 2) throw std::invalid_argument("mec_optimal_error_asymptotic: n must be >= 2");
    if (!(alpha_abs_sq > 0.0))
        throw std::invalid_argument("mec_optimal_error_asymptotic: alpha must be nonzero");
    const double a = alpha_abs_sq;
    const double one_minus = -std::expm1(-4.0 * a);
    const double err = helstrom_error_symmetric(a) +
                       a * std::exp(-4.0 * a) / (n * std::pow(one_minus, 1.5));
    return paper_literal ? paper_literal_map(err) : err;
}

double mec_optimal_error_with_prior(int n, const RicePrior& prior, bool paper_literal) {
    if (n < 1) throw std::invalid_argument("mec_optimal_error_with_prior: n must be >= 1");
    if (!(prior.sigma > 0.0) || !(prior.x_c >= 0.0))
        throw std::invalid_argument("mec_optimal_error_with_prior: invalid prior");
    const double hi = prior.upper_limit();
    const double peak_lo = std::max(0.0, prior.x_c - 10.0 * prior.sigma);
    std::vector<double> pts{0.0};
    if (peak_lo > 0.0) pts.push_back(peak_lo);
    pts.push_back(hi);
    const auto integrand = [&](double r) {
        return prior.pdf(r) * mec_optimal_error(n, r * r, false);
    };
    const QuadResult q = integrate_adaptive(integrand, pts, 1e-10, 1e-12);
    if (!q.converged)
        throw std::runtime_error("mec_optimal_error_with_prior: quadrature tolerance not met");
    return paper_literal ? paper_literal_map(q.value) : q.value;
}

std::vector<double> sector_trace_norm_oracle(int n, const Amplitude& alpha, int m_max) {
    if (n < 1) throw std::invalid_argument("sector_trace_norm_oracle: n must be >= 1");
    if (m_max < 0 || m_max > 60)
        throw std::invalid_argument("sector_trace_norm_oracle: m_max must be in [0, 60]");
    const double a = abs_sq(alpha);
    std::vector<double> out(m_max + 1, 0.0);
    for (int m = 0; m <= m_max; ++m) {
        const FockSector sec = fock_sector(n, m);
        const double g = sec.overlap();
        const double weight = (a == 0.0) ? (m == 0 ? 1.0 : 0.0)
                                         : std::exp(log_poisson_pmf(m, (n + 1.0) * a));
        // rank-2 operator P+ - P- in the orthonormalized span of the two
        // sector vectors: [[1-g^2, -g s], [-g s, -(1-g^2)]] with s = sqrt(1-g^2)
        const double s2 = std::max(0.0, 1.0 - g * g);
        const double s = std::sqrt(s2);
        const double m00 = s2, m11 = -s2, m01 = -g * s;
        const double mid = 0.5 * (m00 + m11);
        const double rad = std::sqrt(0.25 * (m00 - m11) * (m00 - m11) + m01 * m01);
        out[m] = weight * (std::fabs(mid + rad) + std::fabs(mid - rad));
    }
    return out;
}

}  // namespace agnodol
