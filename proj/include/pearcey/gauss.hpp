#ifndef PEARCEY_GAUSS_HPP
#define PEARCEY_GAUSS_HPP

#include <vector>

namespace pearcey {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule; cached per n, accurate to ~1e-15.
const GaussRule& gauss_legendre(int n);

} // namespace pearcey

#endif
