#include "nmcopula/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nmcopula/error.hpp"
#include "nmcopula/quadrature.hpp"

namespace nmcopula {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// log |expm1(x)| without overflow for large positive x.
double log_abs_expm1(double x) {
  if (x > 30.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::abs(std::expm1(x)));
}

std::string theta_str(double theta) { return std::to_string(theta); }

}  // namespace

double norm_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi);
}

double norm_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double inv_norm_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    raise(ErrorCode::DomainError,
          "normal quantile needs 0 < p < 1, got " + std::to_string(p));
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement; the lower tail is refined against Phi, the upper tail
  // against the complementary probability to keep relative accuracy.
  for (int it = 0; it < 2; ++it) {
    double e;
    if (p <= 0.5) {
      e = norm_cdf(x) - p;
    } else {
      e = (1.0 - p) - norm_cdf(-x);
    }
    const double u = e * std::sqrt(kTwoPi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double bvn_cdf(double x1, double x2, double rho) {
  if (std::isnan(x1) || std::isnan(x2) || std::isnan(rho)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (x1 == -kInf || x2 == -kInf) return 0.0;
  if (x1 == kInf) return norm_cdf(x2);
  if (x2 == kInf) return norm_cdf(x1);
  if (rho >= 1.0) return norm_cdf(std::min(x1, x2));
  if (rho <= -1.0) return std::max(0.0, norm_cdf(x1) - norm_cdf(-x2));
  if (rho == 0.0) return norm_cdf(x1) * norm_cdf(x2);

  static const QuadratureRule rule = gauss_legendre(64, 0.0, 1.0);
  const double upper = std::asin(rho);
  const double sq = x1 * x1 + x2 * x2;
  const double cross = 2.0 * x1 * x2;
  double integral = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double t = upper * rule.nodes[k];
    const double s = std::sin(t);
    const double c = std::cos(t);
    integral += rule.weights[k] * std::exp(-(sq - cross * s) / (2.0 * c * c));
  }
  integral *= upper / kTwoPi;
  return std::clamp(norm_cdf(x1) * norm_cdf(x2) + integral, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Archimedean generators

Generator::Generator(Family family, double theta)
    : family_(family), theta_(theta) {
  if (!is_archimedean(family)) {
    raise(ErrorCode::InvalidParameter,
          std::string(family_name(family)) + " is not an Archimedean family");
  }
  validate_classical(family, theta);
  if (family == Family::Frank && theta == 0.0) {
    raise(ErrorCode::InvalidParameter,
          "the Frank generator is undefined at theta = 0 (product copula)");
  }
  switch (family) {
    case Family::AMH: aux_ = 1.0 - theta; break;
    case Family::Frank: aux_ = std::expm1(-theta); break;
    default: break;
  }
#ifndef NDEBUG
  if (!generator_is_valid(*this)) {
    raise(ErrorCode::InvalidParameter, "generator failed its axiom check");
  }
#endif
}

double Generator::phi(double u) const {
  if (u <= 0.0) return kInf;
  if (u >= 1.0) return 0.0;
  switch (family_) {
    case Family::AMH: {
      const double w = (1.0 - u) / u;
      return aux_ > 0.0 ? std::log1p(aux_ * w) / aux_ : w;
    }
    case Family::Clayton:
      return std::expm1(-theta_ * std::log(u)) / theta_;
    case Family::Frank: {
      // phi = -log(expm1(-theta u) / expm1(-theta)). Near u = 1 the ratio is
      // close to 1 and phi = -log1p(r) with r = ratio - 1 formed without
      // cancellation; elsewhere 1 + r would cancel, so take the log ratio.
      const double r =
          -std::exp(-theta_ * u) * std::expm1(-theta_ * (1.0 - u)) / aux_;
      if (r > -0.5) return -std::log1p(r);
      return log_abs_expm1(-theta_) - log_abs_expm1(-theta_ * u);
    }
    default: break;
  }
  return 0.0;
}

namespace {

// log(-phi'(u)) and log(phi''(u)); all three generators have phi' < 0 < phi''
// on (0, 1).
double log_neg_phi_prime(Family f, double theta, double aux, double u) {
  switch (f) {
    case Family::AMH:
      return -2.0 * std::log(u) - std::log1p(aux * (1.0 - u) / u);
    case Family::Clayton:
      return -(theta + 1.0) * std::log(u);
    case Family::Frank:
      return std::log(std::abs(theta)) - log_abs_expm1(theta * u);
    default: break;
  }
  return 0.0;
}

double log_phi_second(Family f, double theta, double aux, double u) {
  switch (f) {
    case Family::AMH:
      return std::log(aux + 2.0 * u * theta) - 4.0 * std::log(u) -
             2.0 * std::log1p(aux * (1.0 - u) / u);
    case Family::Clayton:
      return std::log1p(theta) - (theta + 2.0) * std::log(u);
    case Family::Frank:
      return 2.0 * std::log(std::abs(theta)) + theta * u -
             2.0 * log_abs_expm1(theta * u);
    default: break;
  }
  return 0.0;
}

}  // namespace

double Generator::phi_prime(double u) const {
  return -std::exp(log_neg_phi_prime(family_, theta_, aux_, u));
}

double Generator::phi_second(double u) const {
  return std::exp(log_phi_second(family_, theta_, aux_, u));
}

double Generator::phi_at_zero() const { return kInf; }

double Generator::phi_inverse(double z) const {
  if (z <= 0.0) return 1.0;
  if (z >= phi_at_zero()) return 0.0;
  switch (family_) {
    case Family::AMH: {
      const double w = aux_ > 0.0 ? std::expm1(aux_ * z) / aux_ : z;
      return 1.0 / (1.0 + w);
    }
    case Family::Clayton:
      return std::exp(-std::log1p(theta_ * z) / theta_);
    case Family::Frank: {
      if (theta_ > 0.0 && z <= std::numbers::ln2) {
        return -std::log(-std::expm1(-z) + std::exp(-z - theta_)) / theta_;
      }
      return -std::log1p(std::exp(-z) * aux_) / theta_;
    }
    default: break;
  }
  return 0.0;
}

bool generator_is_valid(const Generator& g, int n) {
  if (std::abs(g.phi(1.0)) > 0.0) return false;
  double prev_phi = kInf;
  double prev_slope = -kInf;
  for (int i = 1; i <= n; ++i) {
    const double u = static_cast<double>(i) / (n + 1);
    const double v = g.phi(u);
    const double s = g.phi_prime(u);
    if (!(v < prev_phi) || !(s < 0.0) || !(g.phi_second(u) > 0.0)) return false;
    // Convexity: the slope must not decrease (within rounding).
    if (s < prev_slope - 1e-9 * std::abs(s)) return false;
    prev_phi = v;
    prev_slope = s;
  }
  return true;
}

double archimedean_cdf(const Generator& g, double u1, double u2) {
  // Rounding can step just outside the Frechet bounds.
  return std::clamp(g.phi_inverse(g.phi(u1) + g.phi(u2)),
                    std::max(u1 + u2 - 1.0, 0.0), std::min(u1, u2));
}

double archimedean_log_density(const Generator& g, double u1, double u2) {
  const double c = archimedean_cdf(g, u1, u2);
  if (c <= 0.0) return -kInf;
  const Family f = g.family();
  const double th = g.theta();
  const double aux = f == Family::AMH ? 1.0 - th : 0.0;
  return log_phi_second(f, th, aux, c) + log_neg_phi_prime(f, th, aux, u1) +
         log_neg_phi_prime(f, th, aux, u2) -
         3.0 * log_neg_phi_prime(f, th, aux, c);
}

double archimedean_density(const Generator& g, double u1, double u2) {
  return std::exp(archimedean_log_density(g, u1, u2));
}

double archimedean_conditional_cdf(const Generator& g, Margin m, double u1,
                                   double u2) {
  const double c = archimedean_cdf(g, u1, u2);
  if (c <= 0.0) return 0.0;
  const double uo = m == Margin::U1 ? u2 : u1;
  const Family f = g.family();
  const double th = g.theta();
  const double aux = f == Family::AMH ? 1.0 - th : 0.0;
  const double v = std::exp(log_neg_phi_prime(f, th, aux, uo) -
                            log_neg_phi_prime(f, th, aux, c));
  return std::clamp(v, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Family dispatch

void validate_classical(Family family, double theta) {
  const auto bad = [&](const char* domain) {
    raise(ErrorCode::InvalidParameter,
          std::string(family_name(family)) + " theta must lie in " + domain +
              ", got " + theta_str(theta));
  };
  if (!std::isfinite(theta)) bad("a finite range");
  switch (family) {
    case Family::AMH:
    case Family::FGM:
    case Family::Gaussian:
      if (theta < -1.0 || theta > 1.0) bad("[-1, 1]");
      break;
    case Family::Clayton:
      if (!(theta > 0.0)) bad("(0, inf)");
      break;
    case Family::Frank:
      break;
    default:
      raise(ErrorCode::InvalidParameter,
            std::string(family_name(family)) + " is not a classical family");
  }
}

namespace {

struct NormalScores {
  double x1, x2;
};

NormalScores scores(double u1, double u2) {
  return {inv_norm_cdf(u1), inv_norm_cdf(u2)};
}

double gaussian_log_density(double theta, double x1, double x2) {
  const double one_minus = 1.0 - theta * theta;
  return -0.5 * std::log(one_minus) -
         (theta * theta * (x1 * x1 + x2 * x2) - 2.0 * theta * x1 * x2) /
             (2.0 * one_minus);
}

void require_gaussian_density(double theta) {
  if (std::abs(theta) >= 1.0) {
    raise(ErrorCode::NoDensity,
          "Gaussian copula with |theta| = 1 is a Frechet bound");
  }
}

}  // namespace

double classical_cdf(Family family, double theta, double u1, double u2) {
  validate_classical(family, theta);
  switch (family) {
    case Family::AMH:
    case Family::Clayton:
      return archimedean_cdf(Generator(family, theta), u1, u2);
    case Family::Frank:
      if (theta == 0.0) return u1 * u2;
      return archimedean_cdf(Generator(family, theta), u1, u2);
    case Family::FGM:
      return std::clamp(u1 * u2 + theta * u1 * (1.0 - u1) * u2 * (1.0 - u2),
                        0.0, 1.0);
    case Family::Gaussian: {
      if (theta == 0.0) return u1 * u2;
      if (theta >= 1.0) return std::min(u1, u2);
      if (theta <= -1.0) return std::max(u1 + u2 - 1.0, 0.0);
      const auto [x1, x2] = scores(u1, u2);
      return bvn_cdf(x1, x2, theta);
    }
    default: break;
  }
  return 0.0;
}

double classical_log_density(Family family, double theta, double u1,
                             double u2) {
  validate_classical(family, theta);
  switch (family) {
    case Family::AMH:
    case Family::Clayton:
      return archimedean_log_density(Generator(family, theta), u1, u2);
    case Family::Frank:
      if (theta == 0.0) return 0.0;
      return archimedean_log_density(Generator(family, theta), u1, u2);
    case Family::FGM:
      return std::log1p(theta * (1.0 - 2.0 * u1) * (1.0 - 2.0 * u2));
    case Family::Gaussian: {
      require_gaussian_density(theta);
      if (theta == 0.0) return 0.0;
      const auto [x1, x2] = scores(u1, u2);
      return gaussian_log_density(theta, x1, x2);
    }
    default: break;
  }
  return 0.0;
}

double classical_density(Family family, double theta, double u1, double u2) {
  if (family == Family::FGM) {
    validate_classical(family, theta);
    return std::max(0.0, 1.0 + theta * (1.0 - 2.0 * u1) * (1.0 - 2.0 * u2));
  }
  return std::exp(classical_log_density(family, theta, u1, u2));
}

double classical_conditional_cdf(Family family, double theta, Margin m,
                                 double u1, double u2) {
  validate_classical(family, theta);
  const double ud = m == Margin::U1 ? u1 : u2;
  const double uo = m == Margin::U1 ? u2 : u1;
  switch (family) {
    case Family::AMH:
    case Family::Clayton:
      return archimedean_conditional_cdf(Generator(family, theta), m, u1, u2);
    case Family::Frank:
      if (theta == 0.0) return ud;
      return archimedean_conditional_cdf(Generator(family, theta), m, u1, u2);
    case Family::FGM:
      return std::clamp(ud + theta * (1.0 - 2.0 * uo) * ud * (1.0 - ud), 0.0,
                        1.0);
    case Family::Gaussian: {
      require_gaussian_density(theta);
      if (theta == 0.0) return ud;
      const double xd = inv_norm_cdf(ud);
      const double xo = inv_norm_cdf(uo);
      return norm_cdf((xd - theta * xo) / std::sqrt(1.0 - theta * theta));
    }
    default: break;
  }
  return 0.0;
}

}  // namespace nmcopula
