#include "nmcopula/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nmcopula/error.hpp"

namespace nmcopula {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) raise(ErrorCode::InvalidParameter, "quadrature order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi's initial guess for the i-th root of P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints,
                                        int order, double a, double b) {
  std::vector<double> edges{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double l, double r) { return std::abs(l - r) < 1e-14; }),
              edges.end());

  const QuadratureRule base = gauss_legendre(order, 0.0, 1.0);
  QuadratureRule rule;
  rule.nodes.reserve((edges.size() - 1) * order);
  rule.weights.reserve((edges.size() - 1) * order);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p];
    const double width = edges[p + 1] - lo;
    for (int k = 0; k < order; ++k) {
      rule.nodes.push_back(lo + width * base.nodes[k]);
      rule.weights.push_back(width * base.weights[k]);
    }
  }
  return rule;
}

}  // namespace nmcopula
