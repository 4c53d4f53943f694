#include "nmcopula/normal_mode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nmcopula/error.hpp"
#include "nmcopula/root_finding.hpp"

namespace nmcopula {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dimension(const NormalModeParams& p, std::size_t d) {
  if (static_cast<std::size_t>(p.dimension()) != d) {
    raise(ErrorCode::DimensionMismatch,
          "normal mode copula has dimension " + std::to_string(p.dimension()) +
              ", point has " + std::to_string(d));
  }
}

void require_bivariate(const NormalModeParams& p) {
  if (p.dimension() != 2) {
    raise(ErrorCode::DimensionMismatch,
          "operation needs a bivariate normal mode copula");
  }
}

int kappa_of(const NormalModeParams& p, Margin m) {
  return p.kappa[m == Margin::U1 ? 0 : 1];
}

}  // namespace

void NormalModeParams::validate() const {
  if (!(theta >= -1.0 && theta <= 1.0)) {
    raise(ErrorCode::InvalidParameter,
          "normal mode amplitude must lie in [-1, 1], got " +
              std::to_string(theta));
  }
  if (kappa.size() < 2) {
    raise(ErrorCode::InvalidParameter, "need at least two mode numbers");
  }
  for (int k : kappa) {
    if (k < 1) {
      raise(ErrorCode::InvalidParameter,
            "mode numbers must be positive integers, got " + std::to_string(k));
    }
  }
}

double nm_cdf(const NormalModeParams& p, std::span<const double> u) {
  p.validate();
  require_dimension(p, u.size());
  double prod = 1.0;
  double trig = p.theta;
  for (std::size_t d = 0; d < u.size(); ++d) {
    const double kpi = p.kappa[d] * kPi;
    prod *= u[d];
    trig *= std::sin(kpi * u[d]) / kpi;
  }
  return std::clamp(prod + trig, 0.0, 1.0);
}

double nm_cdf(const NormalModeParams& p, double u1, double u2) {
  const double u[2] = {u1, u2};
  return nm_cdf(p, u);
}

double nm_cosine_product(std::span<const int> kappa, std::span<const double> u) {
  double prod = 1.0;
  for (std::size_t d = 0; d < u.size(); ++d) {
    prod *= std::cos(kappa[d] * kPi * u[d]);
  }
  return prod;
}

double nm_density(const NormalModeParams& p, std::span<const double> u) {
  p.validate();
  require_dimension(p, u.size());
  return std::max(0.0, 1.0 + p.theta * nm_cosine_product(p.kappa, u));
}

double nm_density(const NormalModeParams& p, double u1, double u2) {
  const double u[2] = {u1, u2};
  return nm_density(p, u);
}

double nm_conditional_cdf(const NormalModeParams& p, Margin m, double u1,
                          double u2) {
  p.validate();
  require_bivariate(p);
  const double ud = m == Margin::U1 ? u1 : u2;
  const double uo = m == Margin::U1 ? u2 : u1;
  const double kd = kappa_of(p, m) * kPi;
  const double ko = kappa_of(p, other(m)) * kPi;
  const double v = ud + p.theta / kd * std::cos(ko * uo) * std::sin(kd * ud);
  return std::clamp(v, 0.0, 1.0);
}

double nm_axis_quantile(double amplitude, int kappa, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    raise(ErrorCode::DomainError, "probability must lie in (0, 1)");
  }
  if (amplitude == 0.0) return prob;
  const double kpi = kappa * kPi;
  auto cdf = [&](double u) { return u + amplitude / kpi * std::sin(kpi * u); };
  auto slope = [&](double u) { return 1.0 + amplitude * std::cos(kpi * u); };
  return invert_monotone(cdf, slope, prob);
}

double nm_conditional_quantile(const NormalModeParams& p, Margin m,
                               double u_given, double prob) {
  p.validate();
  require_bivariate(p);
  if (!(u_given > 0.0 && u_given < 1.0)) {
    raise(ErrorCode::DomainError, "conditioning value must lie in (0, 1)");
  }
  const double amplitude =
      p.theta * std::cos(kappa_of(p, other(m)) * kPi * u_given);
  return nm_axis_quantile(amplitude, kappa_of(p, m), prob);
}

NormalModeParams nm_associated(const NormalModeParams& p, Reflection which) {
  p.validate();
  require_bivariate(p);
  int parity_source = 0;
  switch (which) {
    case Reflection::Flip1: parity_source = p.kappa[0]; break;
    case Reflection::Flip2: parity_source = p.kappa[1]; break;
    case Reflection::Survival: parity_source = p.kappa[0] + p.kappa[1]; break;
  }
  NormalModeParams out = p;
  if (parity_source % 2 != 0) out.theta = -p.theta;
  return out;
}

MeasureSet nm_measures(const NormalModeParams& p) {
  p.validate();
  require_bivariate(p);
  const double k1 = p.kappa[0];
  const double k2 = p.kappa[1];
  const double pi2 = kPi * kPi;
  const double pi4 = pi2 * pi2;
  const bool both_odd = (p.kappa[0] % 2 == 1) && (p.kappa[1] % 2 == 1);

  MeasureSet out;
  out.provenance = MeasureProvenance::ClosedForm;
  out.sigma = 48.0 * std::abs(p.theta) / (k1 * k2 * pi4);
  out.rho = both_odd ? 48.0 * p.theta / (k1 * k1 * k2 * k2 * pi4) : 0.0;
  out.tau = both_odd ? 32.0 * p.theta / (k1 * k1 * k2 * k2 * pi4) : 0.0;
  out.beta = 4.0 * nm_cdf(p, 0.5, 0.5) - 1.0;
  // Only the diagonal terms survive: int sin(k1 pi u) sin(k2 pi u) du is 1/2
  // when k1 == k2 and 0 otherwise, and the anti-diagonal picks up a sign
  // (-1)^(k+1).
  if (p.kappa[0] == p.kappa[1]) {
    const double diag = p.theta / (k1 * k1 * pi2);
    out.footrule = 3.0 * diag;
    out.gamma = p.kappa[0] % 2 == 1 ? 4.0 * diag : 0.0;
  }
  return out;
}

bool nm_is_symmetric(const NormalModeParams& p) {
  require_bivariate(p);
  return p.kappa[0] == p.kappa[1];
}

Monotonicity nm_monotonicity_class(const NormalModeParams& p) {
  require_bivariate(p);
  if (p.theta == 0.0) return Monotonicity::Independent;
  if (p.kappa[0] == 1 && p.kappa[1] == 1) {
    return p.theta > 0.0 ? Monotonicity::Positive : Monotonicity::Negative;
  }
  return Monotonicity::Nonmonotonic;
}

}  // namespace nmcopula
