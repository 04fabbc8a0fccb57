#pragma once

#include <array>
#include <complex>

namespace agnodol {

using Amplitude = std::complex<double>;

inline double abs_sq(const Amplitude& z) {
    return z.real() * z.real() + z.imag() * z.imag();
}

// Two-class problem: n labeled copies of each of |alpha1>, |alpha2>, plus one
// test copy |delta> promised to equal one of them. delta_is_class1 is the
// hidden truth label used by simulations.
struct GeneralProblem {
    Amplitude alpha1{0.0, 0.0};
    Amplitude alpha2{0.0, 0.0};
    int n = 1;
    bool delta_is_class1 = true;
};

// Symmetric binary problem: test state |+alpha> or |-alpha> with priors
// p_plus/p_minus, and n training copies of |alpha| available to the receiver.
struct SymmetricProblem {
    Amplitude alpha{0.0, 0.0};
    int n = 1;
    double p_plus = 0.5;
    double p_minus = 0.5;
};

// Real orthogonal 3-mode scattering matrix (passive linear optics).
struct ScatteringMatrix3 {
    std::array<std::array<double, 3>, 3> m{};

    std::array<Amplitude, 3> apply(const std::array<Amplitude, 3>& in) const;
    // max_ij |(S^T S - I)_ij|
    double orthogonality_defect() const;
};

// |<a|b>|^2 = exp(-|a-b|^2) for coherent states.
double overlap_modulus_sq(const Amplitude& a, const Amplitude& b);

// m identical copies |a>^m concentrated into the single mode |sqrt(m) a>.
Amplitude concentrate(int m, const Amplitude& a);

// The 3-port network that maps (sqrt(n) a1, sqrt(n) a2, delta) to
// (difference mode, shifted test mode, class-independent residual).
ScatteringMatrix3 scattering_matrix(int n);

struct ReducedSymmetric {
    // alpha = alpha' = sqrt(2n/(2n+1)) (a1-a2)/2, n = 2n+1 (the difference
    // mode arrives pre-concentrated as |sqrt(2n+1) alpha'>), flat priors.
    SymmetricProblem problem;
    // Test-mode amplitude delta' = sqrt(2n/(2n+1)) ((a1+a2)/2 - delta).
    // delta = alpha1 gives delta' = -alpha'; the symmetric receiver's class
    // "+" is relabeled to mean delta = alpha1, which flips this sign.
    Amplitude delta_prime;
    // Third output mode: (delta + n (a1+a2)) / sqrt(2n+1). Identical for both
    // classes up to the alpha1<->alpha2 swap of the test copy, and discarded.
    Amplitude residual;
};

// Reduce the general two-class problem to a symmetric +-alpha' one by linear
// optics: concentrate each training block, scatter with scattering_matrix(n).
// alpha1 == alpha2 is allowed and yields alpha' = 0 (classes identical; the
// best any receiver can do is guess the larger prior).
ReducedSymmetric reduce_to_symmetric(const GeneralProblem& p);

}  // namespace agnodol
