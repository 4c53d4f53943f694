#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nmcopula/family.hpp"
#include "nmcopula/matrix.hpp"
#include "nmcopula/normal_mode.hpp"

namespace nmcopula {

/// A fully specified copula: family, scalar parameter, mode numbers (normal
/// mode only) and dimension. Construction validates the parameter domain, so
/// every live model is a valid copula. Frank with theta = 0 is stored as the
/// product copula.
class CopulaModel {
 public:
  static CopulaModel normal_mode(double theta, std::vector<int> kappa);
  static CopulaModel normal_mode(const NormalModeParams& params);
  static CopulaModel product(int dimension = 2);
  static CopulaModel frechet_lower();
  static CopulaModel frechet_upper(int dimension = 2);
  static CopulaModel amh(double theta);
  static CopulaModel clayton(double theta);
  static CopulaModel frank(double theta);
  static CopulaModel fgm(double theta);
  static CopulaModel gaussian(double theta);

  /// Generic factory. `kappa` is used by NormalMode only; `dimension` by the
  /// families that allow D > 2 (ignored when kappa fixes it).
  static CopulaModel make(Family family, double theta = 0.0,
                          std::vector<int> kappa = {}, int dimension = 2);

  Family family() const noexcept { return family_; }
  int dimension() const noexcept { return dimension_; }
  double theta() const noexcept { return theta_; }
  std::span<const int> kappa() const noexcept { return kappa_; }

  /// Throws InvalidParameter for other families.
  NormalModeParams normal_mode_params() const;

  /// e.g. "normal_mode(theta=1, kappa=(2,1))".
  std::string describe() const;

 private:
  CopulaModel(Family family, double theta, std::vector<int> kappa,
              int dimension)
      : family_(family),
        theta_(theta),
        kappa_(std::move(kappa)),
        dimension_(dimension) {}

  Family family_;
  double theta_;
  std::vector<int> kappa_;
  int dimension_;
};

/// C(u). Coordinates may lie anywhere in the closed cube [0, 1]^D: a zero
/// coordinate gives 0 and all-but-one coordinates at 1 gives the remaining
/// one, without touching the family formula.
double cdf(const CopulaModel& m, std::span<const double> u);
double cdf(const CopulaModel& m, double u1, double u2);

/// Mixed partial derivative of C; requires an absolutely continuous family
/// (NoDensity for the Frechet bounds and Gaussian with |theta| = 1) and an
/// interior point.
double density(const CopulaModel& m, std::span<const double> u);
double density(const CopulaModel& m, double u1, double u2);
double log_density(const CopulaModel& m, double u1, double u2);

/// Bivariate only. Conditional CDF of coordinate `d` given the other one,
/// i.e. dC/du_other evaluated at (u1, u2).
double conditional_cdf(const CopulaModel& m, Margin d, double u1, double u2);

/// u_d solving conditional_cdf(m, d, ...) = prob for fixed u_given. The
/// normal mode family uses its closed-form slope; everything else goes
/// through generic_conditional_quantile.
double conditional_quantile(const CopulaModel& m, Margin d, double u_given,
                            double prob);

/// Family-agnostic inverse: bracketing bisection on [1e-15, 1 - 1e-15] with
/// Newton steps (slope = density), tolerance 1e-12, at most 200 iterations.
double generic_conditional_quantile(const CopulaModel& m, Margin d,
                                    double u_given, double prob);

/// n draws by conditional inversion, one row per draw. Deterministic in
/// (seed, n); the i-th row depends only on (seed, i).
RowMatrix sample(const CopulaModel& m, std::size_t n, std::uint64_t seed);

struct AxiomReport {
  double max_boundary_error = 0.0;
  double min_volume = 0.0;
  std::size_t rectangles = 0;

  static constexpr double kBoundaryTolerance = 1e-12;
  static constexpr double kVolumeTolerance = 1e-12;

  bool passed() const noexcept {
    return max_boundary_error <= kBoundaryTolerance &&
           min_volume >= -kVolumeTolerance;
  }
};

/// Boundary conditions on a 1000-point edge grid plus the D-increasing
/// volume on `n_rectangles` random boxes.
AxiomReport check_copula_axioms(const CopulaModel& m, std::size_t n_rectangles,
                                std::uint64_t seed);

/// C-volume of the box [lower, upper] by inclusion-exclusion over corners.
double copula_volume(const CopulaModel& m, std::span<const double> lower,
                     std::span<const double> upper);

enum class ConcordanceVerdict { ABelowB, BBelowA, Equal, Incomparable };

std::string_view to_string(ConcordanceVerdict v) noexcept;

struct ConcordanceResult {
  ConcordanceVerdict verdict = ConcordanceVerdict::Equal;
  double max_a_minus_b = 0.0;  // max over the lattice of C_a - C_b
  double max_b_minus_a = 0.0;
};

/// Pointwise comparison of two bivariate CDFs on the interior lattice
/// i/(grid_n + 1), tolerance 1e-12.
ConcordanceResult concordance_compare(const CopulaModel& a,
                                      const CopulaModel& b, int grid_n);

}  // namespace nmcopula
