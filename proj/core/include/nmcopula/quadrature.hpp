#pragma once

#include <span>
#include <vector>

namespace nmcopula {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule mapped to [a, b]. Nodes are computed by Newton
/// iteration on the Legendre three-term recurrence.
QuadratureRule gauss_legendre(int n, double a = 0.0, double b = 1.0);

/// Composite Gauss-Legendre on [a, b] with an `order`-point rule on every
/// panel between consecutive breakpoints. Breakpoints outside (a, b) are
/// ignored; duplicates are merged.
QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints,
                                        int order, double a = 0.0,
                                        double b = 1.0);

}  // namespace nmcopula
