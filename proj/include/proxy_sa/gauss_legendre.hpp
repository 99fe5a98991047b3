#pragma once

#include <vector>

namespace proxy_sa {

struct QuadratureRule {
    std::vector<double> nodes;    // in (0, 1), open at both ends
    std::vector<double> weights;  // sum to 1
    int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Legendre rule mapped to the unit interval (0,1).
QuadratureRule gauss_legendre_unit(int n);

// Same rule mapped to (a, b); weights sum to b - a.
QuadratureRule gauss_legendre_interval(int n, double a, double b);

}  // namespace proxy_sa
