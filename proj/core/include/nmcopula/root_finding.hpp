#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "nmcopula/error.hpp"

namespace nmcopula {

struct MonotoneInverseOptions {
  double lower = 1e-15;
  double upper = 1.0 - 1e-15;
  double tolerance = 1e-12;
  int max_iterations = 200;
};

/// Solves cdf(x) = target for a nondecreasing cdf on the bracket. Newton
/// steps use `slope` (the derivative of cdf) and are accepted only when they
/// land strictly inside the current bracket; otherwise the bracket is
/// bisected.
template <class Cdf, class Slope>
double invert_monotone(Cdf&& cdf, Slope&& slope, double target,
                       const MonotoneInverseOptions& opt = {}) {
  double lo = opt.lower;
  double hi = opt.upper;
  double f_lo = cdf(lo) - target;
  double f_hi = cdf(hi) - target;
  if (f_lo >= 0.0) return lo;
  if (f_hi <= 0.0) return hi;

  double x = lo + (hi - lo) * ((0.0 - f_lo) / (f_hi - f_lo));
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double fx = cdf(x) - target;
    if (std::abs(fx) <= opt.tolerance) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return x;

    const double d = slope(x);
    double next = (d > 0.0 && std::isfinite(d)) ? x - fx / d : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  raise(ErrorCode::ConvergenceFailure,
        "monotone inverse did not converge in " +
            std::to_string(opt.max_iterations) + " iterations (target " +
            std::to_string(target) + ")");
}

}  // namespace nmcopula
