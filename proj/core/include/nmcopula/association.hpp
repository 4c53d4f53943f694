#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nmcopula/copula_core.hpp"
#include "nmcopula/measures.hpp"

namespace nmcopula {

/// Tensor-product composite Gauss-Legendre settings for the unit square.
/// The per-axis rule uses 8 equal panels plus any breakpoints the model
/// supplies (lines where C - u1 u2 changes sign), `nodes / 8` points per
/// panel.
struct QuadSpec {
  int nodes = 256;

  void validate() const;  // nodes >= 32
};

/// Breakpoints along axis `d` at which |C - u1 u2| has kinks; j / kappa_d for
/// the normal mode family, none otherwise.
std::vector<double> sign_change_lines(const CopulaModel& m, Margin axis);

/// All six measures by quadrature of their integral definitions:
///   rho = 12 int (C - u1 u2), sigma = 12 int |C - u1 u2|,
///   tau = 1 - 4 int dC/du1 dC/du2,
///   gamma = 4 [int C(u, 1-u) - int (u - C(u, u))],
///   footrule = 6 int C(u, u) - 2,  beta = 4 C(1/2, 1/2) - 1.
/// Throws NoDensity for the Frechet bounds (tau needs the partials).
MeasureSet measures_numeric(const CopulaModel& m, const QuadSpec& q = {});

/// Omega(C_a, C_b) = 4 int C_a dC_b - 1; C_b needs a density.
double concordance_functional(const CopulaModel& a, const CopulaModel& b,
                              const QuadSpec& q = {});

struct MonteCarloMeasures {
  MeasureSet estimate;
  MeasureSet standard_error;  // batch-means over 20 batches
  std::size_t n = 0;
};

/// Rank estimators on n draws from the model.
MonteCarloMeasures measures_mc(const CopulaModel& m, std::size_t n,
                               std::uint64_t seed);

/// Sample estimators on paired data (ties handled as tau-b for Kendall,
/// average ranks for Spearman).
double kendall_tau(std::span<const double> x, std::span<const double> y);
double spearman_rho(std::span<const double> x, std::span<const double> y);

struct TailPoint {
  double u = 0.0;
  double lower = 0.0;  // C(u, u) / u
  double upper = 0.0;  // (1 - 2v + C(v, v)) / (1 - v) at v = 1 - u
};

struct TailProfile {
  std::vector<TailPoint> points;  // in the order given
  bool lower_decreasing = false;  // along decreasing u
  bool upper_decreasing = false;
};

/// u values must lie in (0, 1/2).
TailProfile tail_dependence_profile(const CopulaModel& m,
                                    std::span<const double> u_values);

enum class QuadrantVerdict { PQD, NQD, Mixed, Independent };

std::string_view to_string(QuadrantVerdict v) noexcept;

struct QuadrantMap {
  int grid_n = 0;
  std::vector<int> signs;  // row-major over (i, j), values -1, 0, +1
  QuadrantVerdict verdict = QuadrantVerdict::Independent;

  int sign_at(int i, int j) const { return signs[i * grid_n + j]; }
};

/// Sign of C - u1 u2 on the interior lattice i/(grid_n + 1), tolerance 1e-12.
QuadrantMap quadrant_dependence_map(const CopulaModel& m, int grid_n);

}  // namespace nmcopula
