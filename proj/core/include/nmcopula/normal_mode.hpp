#pragma once

#include <span>
#include <vector>

#include "nmcopula/family.hpp"
#include "nmcopula/measures.hpp"

namespace nmcopula {

/// Amplitude theta in [-1, 1] and one positive integer mode number per
/// coordinate. The copula is
///   C(u) = prod u_d + theta * prod sin(kappa_d pi u_d) / (kappa_d pi)
/// with density 1 + theta * prod cos(kappa_d pi u_d).
struct NormalModeParams {
  double theta = 0.0;
  std::vector<int> kappa{1, 1};

  int dimension() const noexcept { return static_cast<int>(kappa.size()); }

  /// Throws InvalidParameter unless -1 <= theta <= 1, every kappa_d >= 1 and
  /// there are at least two coordinates.
  void validate() const;
};

double nm_cdf(const NormalModeParams& p, std::span<const double> u);
double nm_cdf(const NormalModeParams& p, double u1, double u2);

double nm_density(const NormalModeParams& p, std::span<const double> u);
double nm_density(const NormalModeParams& p, double u1, double u2);

/// prod_d cos(kappa_d pi u_d); the density is 1 + theta times this.
double nm_cosine_product(std::span<const int> kappa, std::span<const double> u);

/// Conditional CDF of the `m` coordinate given the other one:
///   u_m + theta/(kappa_m pi) cos(kappa_other pi u_other) sin(kappa_m pi u_m).
double nm_conditional_cdf(const NormalModeParams& p, Margin m, double u1,
                          double u2);

/// Inverse of nm_conditional_cdf in u_m for fixed u_given, using the
/// closed-form density as the Newton slope.
double nm_conditional_quantile(const NormalModeParams& p, Margin m,
                               double u_given, double prob);

/// Solves u + a sin(kappa pi u)/(kappa pi) = prob for u in (0, 1), |a| <= 1.
/// Every conditional of the product-form density has this shape, which is
/// what the multivariate sampler uses.
double nm_axis_quantile(double amplitude, int kappa, double prob);

enum class Reflection { Flip1, Flip2, Survival };

/// Parameters of the associated copula. Flip1 is u2 - C(1-u1, u2), Flip2 is
/// u1 - C(u1, 1-u2), Survival is u1 + u2 - 1 + C(1-u1, 1-u2). Each stays in
/// the family with theta kept when the relevant mode number (sum, for
/// Survival) is even and negated otherwise.
NormalModeParams nm_associated(const NormalModeParams& p, Reflection which);

/// Closed-form association measures. Blomqvist's beta is 4 C(1/2, 1/2) - 1
/// = 4 theta sin(k1 pi/2) sin(k2 pi/2) / (k1 k2 pi^2). Gini's gamma and the
/// foot-rule are evaluated from their integral definitions: with k1 == k2 == k,
/// footrule = 3 theta / (k^2 pi^2) and gamma = 4 theta / (k^2 pi^2) for odd k;
/// both vanish otherwise.
MeasureSet nm_measures(const NormalModeParams& p);

/// Family-level rule: exchangeable iff kappa1 == kappa2. At theta = 0 the
/// copula is the product copula and pointwise symmetric anyway; the predicate
/// still reports the rule.
bool nm_is_symmetric(const NormalModeParams& p);

enum class Monotonicity { Positive, Negative, Independent, Nonmonotonic };

Monotonicity nm_monotonicity_class(const NormalModeParams& p);

}  // namespace nmcopula
