#pragma once

#include <functional>
#include <optional>
#include <span>

namespace nmcopula {

struct ScalarMaximum {
  double argmax = 0.0;
  double value = 0.0;
  bool at_boundary = false;
  bool converged = false;
  int evaluations = 0;
};

struct ScalarSearchOptions {
  double tolerance = 1e-8;
  int max_newton_steps = 40;
  /// Golden-section stops once the bracket is this narrow, then Newton takes
  /// over.
  double golden_width = 1e-4;
};

/// Maximises a unimodal objective on [lo, hi]. Golden-section bracketing is
/// followed by guarded Newton with central-difference derivatives; a warm
/// start skips the bracketing and falls back to it only if Newton fails.
/// Non-finite objective values are treated as -infinity.
ScalarMaximum maximize_scalar(const std::function<double(double)>& f, double lo,
                              double hi, std::optional<double> warm_start = {},
                              const ScalarSearchOptions& opt = {});

/// Maximises sum_i log(1 + theta a_i) over theta in [lo, hi] (a concave
/// objective) with Newton steps safeguarded by bisection on the score.
/// Analytic derivatives throughout.
ScalarMaximum maximize_log1p_linear(std::span<const double> a, double lo,
                                    double hi,
                                    std::optional<double> warm_start = {},
                                    double tolerance = 1e-8,
                                    std::optional<std::size_t> skip = {});

}  // namespace nmcopula
