#pragma once

#include <vector>

namespace hopw {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

} // namespace hopw
