#include "nmcopula/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nmcopula/error.hpp"

namespace nmcopula {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class CountingObjective {
 public:
  explicit CountingObjective(const std::function<double(double)>& f) : f_(f) {}
  double operator()(double x) {
    ++evaluations;
    const double v = f_(x);
    return std::isfinite(v) ? v : kNegInf;
  }
  int evaluations = 0;

 private:
  const std::function<double(double)>& f_;
};

struct Derivatives {
  double gradient;
  double curvature;
};

// Three-point differences, one-sided within a step of either bound.
Derivatives differences(CountingObjective& f, double x, double fx, double lo,
                        double hi) {
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  if (x - h < lo) {
    const double f1 = f(x + h), f2 = f(x + 2 * h);
    return {(-3 * fx + 4 * f1 - f2) / (2 * h), (fx - 2 * f1 + f2) / (h * h)};
  }
  if (x + h > hi) {
    const double f1 = f(x - h), f2 = f(x - 2 * h);
    return {(3 * fx - 4 * f1 + f2) / (2 * h), (fx - 2 * f1 + f2) / (h * h)};
  }
  const double fp = f(x + h), fm = f(x - h);
  return {(fp - fm) / (2 * h), (fp - 2 * fx + fm) / (h * h)};
}

// Damped Newton ascent kept inside [lo, hi]; every accepted step does not
// decrease f.
ScalarMaximum newton_refine(CountingObjective& f, double x, double lo, double hi,
                            const ScalarSearchOptions& opt) {
  ScalarMaximum out;
  double fx = f(x);
  if (!std::isfinite(fx)) return out;
  const double max_jump = 0.25 * (hi - lo);
  for (int iter = 0; iter < opt.max_newton_steps; ++iter) {
    const auto [g, curv] = differences(f, x, fx, lo, hi);
    if (!std::isfinite(g)) return out;
    if ((x <= lo && g <= 0.0) || (x >= hi && g >= 0.0)) {
      out.converged = true;
      break;
    }
    double step = (curv < 0.0 && std::isfinite(curv)) ? -g / curv
                                                      : std::copysign(max_jump, g);
    step = std::clamp(step, -max_jump, max_jump);
    bool accepted = false;
    double x_new = x, f_new = fx;
    for (int half = 0; half < 50; ++half) {
      x_new = std::clamp(x + step, lo, hi);
      f_new = f(x_new);
      const double slack = 4 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, std::abs(fx));
      if (f_new >= fx - slack) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    const double moved = std::abs(x_new - x);
    if (accepted) {
      x = x_new;
      fx = f_new;
    }
    if (!accepted || moved <= opt.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.argmax = x;
  out.value = f(x);
  return out;
}

ScalarMaximum golden_then_newton(CountingObjective& f, double lo, double hi,
                                 const ScalarSearchOptions& opt) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > opt.golden_width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double start = fc >= fd ? c : d;
  // Let the bounds compete when the bracket has collapsed onto one of them.
  if (a <= lo + opt.golden_width && f(lo) >= std::max(fc, fd)) start = lo;
  if (b >= hi - opt.golden_width && f(hi) >= std::max(fc, fd)) start = hi;
  return newton_refine(f, start, lo, hi, opt);
}

void flag_boundary(ScalarMaximum& r, double lo, double hi, double tol) {
  r.at_boundary = std::abs(r.argmax - lo) <= 10 * tol ||
                  std::abs(r.argmax - hi) <= 10 * tol;
}

}  // namespace

ScalarMaximum maximize_scalar(const std::function<double(double)>& f, double lo,
                              double hi, std::optional<double> warm_start,
                              const ScalarSearchOptions& opt) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    raise(ErrorCode::PreconditionViolated, "search interval must be finite, lo < hi");
  }
  CountingObjective obj(f);
  ScalarMaximum result;
  if (warm_start) {
    result = newton_refine(obj, std::clamp(*warm_start, lo, hi), lo, hi, opt);
  }
  if (!result.converged || !std::isfinite(result.value)) {
    result = golden_then_newton(obj, lo, hi, opt);
  }
  if (!std::isfinite(result.value)) {
    raise(ErrorCode::NonFiniteLikelihood, "objective is not finite anywhere on the search path");
  }
  flag_boundary(result, lo, hi, opt.tolerance);
  result.evaluations = obj.evaluations;
  return result;
}

ScalarMaximum maximize_log1p_linear(std::span<const double> a, double lo,
                                    double hi, std::optional<double> warm_start,
                                    double tolerance,
                                    std::optional<std::size_t> skip) {
  if (!(lo < hi)) raise(ErrorCode::PreconditionViolated, "need lo < hi");
  ScalarMaximum out;
  const auto score = [&](double t, double* curvature) {
    ++out.evaluations;
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (skip && *skip == i) continue;
      const double r = a[i] / (1.0 + t * a[i]);
      s += r;
      c -= r * r;
    }
    if (curvature) *curvature = c;
    return s;
  };
  const auto value = [&](double t) {
    double v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (skip && *skip == i) continue;
      v += std::log1p(t * a[i]);
    }
    return v;
  };

  double left = lo, right = hi;
  if (score(right, nullptr) >= 0.0) {
    out.argmax = right;
  } else if (score(left, nullptr) <= 0.0) {
    out.argmax = left;
  } else {
    // Concave objective: the score is decreasing, positive at left and
    // negative at right.
    double t = std::clamp(warm_start.value_or(0.5 * (lo + hi)), lo, hi);
    for (int iter = 0; iter < 200; ++iter) {
      double curv = 0.0;
      const double s = score(t, &curv);
      if (s > 0.0) left = t; else right = t;
      if (s == 0.0) break;
      double next = curv < 0.0 ? t - s / curv : 0.5 * (left + right);
      if (!(next > left && next < right)) next = 0.5 * (left + right);
      const double moved = std::abs(next - t);
      t = next;
      if (moved <= tolerance || right - left <= tolerance) break;
    }
    out.argmax = t;
  }
  out.value = value(out.argmax);
  out.converged = std::isfinite(out.value);
  out.at_boundary = out.argmax == lo || out.argmax == hi;
  return out;
}

}  // namespace nmcopula
