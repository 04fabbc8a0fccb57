#include "agnodol/math/gauss_hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace agnodol {

namespace {

// Orthonormal Hermite recurrence at z: returns h_q(z) and h_{q-1}(z).
// h_j(z) = z*sqrt(2/j)*h_{j-1} - sqrt((j-1)/j)*h_{j-2}, h_0 = pi^{-1/4}.
void hermite_pair(int q, double z, double& hq, double& hq1) {
    double p1 = 0.7511255444649425;  // pi^{-1/4}
    double p2 = 0.0;
    for (int j = 1; j <= q; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
    }
    hq = p1;
    hq1 = p2;
}

}  // namespace

GaussHermite gauss_hermite(int q) {
    if (q < 1) throw std::invalid_argument("gauss_hermite: q must be >= 1");
    GaussHermite out;
    out.nodes.assign(q, 0.0);
    out.weights.assign(q, 0.0);

    // roots found from the largest down; standard empirical initial guesses
    const int half = (q + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * q + 1.0) - 1.85575 * std::pow(2.0 * q + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(q), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * out.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * out.nodes[1];
        } else {
            z = 2.0 * z - out.nodes[i - 2];
        }
        double hq, hq1;
        for (int it = 0; it < 100; ++it) {
            hermite_pair(q, z, hq, hq1);
            const double dh = std::sqrt(2.0 * q) * hq1;  // h_q'(z)
            const double dz = hq / dh;
            z -= dz;
            if (std::fabs(dz) <= 1e-15 * (1.0 + std::fabs(z))) break;
        }
        hermite_pair(q, z, hq, hq1);
        const double dh = std::sqrt(2.0 * q) * hq1;
        const double w = 2.0 / (dh * dh);
        out.nodes[i] = (q % 2 == 1 && i == half - 1) ? 0.0 : z;
        out.weights[i] = w;
        out.nodes[q - 1 - i] = -out.nodes[i];
        out.weights[q - 1 - i] = w;
    }
    return out;
}

}  // namespace agnodol
