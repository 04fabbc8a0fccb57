#pragma once

#include <vector>

namespace agnodol {

// Nodes and weights for int e^{-x^2} f(x) dx ~ sum_i w_i f(x_i)
// (physicists' convention; nodes symmetric about 0, weights sum to sqrt(pi)).
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussHermite gauss_hermite(int q);

}  // namespace agnodol
