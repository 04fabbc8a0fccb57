#include "agnodol/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace agnodol {

namespace {

void require_finite(const Amplitude& z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument(std::string(what) + ": amplitude must be finite");
}

}  // namespace

std::array<Amplitude, 3> ScatteringMatrix3::apply(const std::array<Amplitude, 3>& in) const {
    std::array<Amplitude, 3> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += m[i][j] * in[j];
    return out;
}

double ScatteringMatrix3::orthogonality_defect() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += m[k][i] * m[k][j];
            worst = std::max(worst, std::fabs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

double overlap_modulus_sq(const Amplitude& a, const Amplitude& b) {
    require_finite(a, "overlap_modulus_sq");
    require_finite(b, "overlap_modulus_sq");
    return std::exp(-abs_sq(a - b));
}

Amplitude concentrate(int m, const Amplitude& a) {
    if (m < 1) throw std::invalid_argument("concentrate: m must be >= 1");
    require_finite(a, "concentrate");
    return std::sqrt(static_cast<double>(m)) * a;
}

ScatteringMatrix3 scattering_matrix(int n) {
    if (n < 1) throw std::invalid_argument("scattering_matrix: n must be >= 1");
    const double dn = n;
    const double r = std::sqrt(2.0 * dn / (2.0 * dn + 1.0));
    ScatteringMatrix3 s;
    s.m[0] = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
    s.m[1] = {1.0 / std::sqrt(4.0 * dn + 2.0), 1.0 / std::sqrt(4.0 * dn + 2.0), -r};
    s.m[2] = {std::sqrt(dn / (2.0 * dn + 1.0)), std::sqrt(dn / (2.0 * dn + 1.0)),
              std::sqrt(1.0 / (2.0 * dn + 1.0))};
    return s;
}

ReducedSymmetric reduce_to_symmetric(const GeneralProblem& p) {
    require_finite(p.alpha1, "reduce_to_symmetric");
    require_finite(p.alpha2, "reduce_to_symmetric");
    if (p.n < 1) throw std::invalid_argument("reduce_to_symmetric: n must be >= 1");

    const double dn = p.n;
    const double r = std::sqrt(2.0 * dn / (2.0 * dn + 1.0));
    const Amplitude delta = p.delta_is_class1 ? p.alpha1 : p.alpha2;
    const Amplitude mean = 0.5 * (p.alpha1 + p.alpha2);

    ReducedSymmetric out;
    out.problem.alpha = r * 0.5 * (p.alpha1 - p.alpha2);
    out.problem.n = 2 * p.n + 1;
    out.problem.p_plus = 0.5;
    out.problem.p_minus = 0.5;
    out.delta_prime = r * (mean - delta);
    out.residual = (delta + dn * (p.alpha1 + p.alpha2)) / std::sqrt(2.0 * dn + 1.0);
    return out;
}

}  // namespace agnodol
