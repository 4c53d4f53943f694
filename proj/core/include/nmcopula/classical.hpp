#pragma once

#include "nmcopula/family.hpp"

namespace nmcopula {

// Scalar normal kernels used by the Gaussian copula.

double norm_pdf(double x) noexcept;
double norm_cdf(double x) noexcept;

/// Standard normal quantile: Acklam's rational approximation refined by
/// Halley steps against norm_cdf. Throws DomainError unless 0 < p < 1.
double inv_norm_cdf(double p);

/// Bivariate standard normal CDF P(X1 <= x1, X2 <= x2) with correlation rho.
/// Integrates the density along the correlation path,
///   Phi(x1) Phi(x2) + (1/2pi) int_0^asin(rho)
///       exp(-(x1^2 + x2^2 - 2 x1 x2 sin t) / (2 cos^2 t)) dt,
/// with a fixed 64-node Gauss-Legendre rule. |rho| = 1 uses the Frechet
/// limits; infinite arguments are marginalised.
double bvn_cdf(double x1, double x2, double rho);

/// Archimedean generator phi for AMH, Clayton or Frank. Generators are only
/// defined up to a positive scale; AMH uses log1p(s (1-u)/u) / s with
/// s = 1 - theta so that theta = 1 stays well defined.
class Generator {
 public:
  Generator(Family family, double theta);

  Family family() const noexcept { return family_; }
  double theta() const noexcept { return theta_; }

  double phi(double u) const;
  double phi_prime(double u) const;
  double phi_second(double u) const;
  /// Pseudo-inverse: phi^{-1}(z) on [0, phi(0)], zero beyond.
  double phi_inverse(double z) const;
  /// phi(0); +infinity for all three (strict) generators here.
  double phi_at_zero() const;

 private:
  Family family_;
  double theta_;
  double aux_ = 0.0;  // AMH: 1 - theta; Frank: expm1(-theta)
};

/// Numerical check of the generator axioms on an n-point grid of (0, 1]:
/// phi(1) = 0, strictly decreasing, convex.
bool generator_is_valid(const Generator& g, int n = 1000);

double archimedean_cdf(const Generator& g, double u1, double u2);
/// -phi''(C) phi'(u1) phi'(u2) / phi'(C)^3
double archimedean_density(const Generator& g, double u1, double u2);
double archimedean_log_density(const Generator& g, double u1, double u2);
/// phi'(u_other) / phi'(C)
double archimedean_conditional_cdf(const Generator& g, Margin m, double u1,
                                   double u2);

/// Throws InvalidParameter when theta is outside the family's domain:
/// AMH [-1, 1], Clayton (0, inf), Frank any finite value, FGM [-1, 1],
/// Gaussian [-1, 1].
void validate_classical(Family family, double theta);

double classical_cdf(Family family, double theta, double u1, double u2);
double classical_density(Family family, double theta, double u1, double u2);
double classical_log_density(Family family, double theta, double u1,
                             double u2);
double classical_conditional_cdf(Family family, double theta, Margin m,
                                 double u1, double u2);

}  // namespace nmcopula
