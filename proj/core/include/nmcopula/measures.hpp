#pragma once

#include <string_view>

namespace nmcopula {

enum class MeasureProvenance { ClosedForm, Quadrature, MonteCarlo };

std::string_view to_string(MeasureProvenance p) noexcept;

/// Six scalar association measures of a bivariate copula.
struct MeasureSet {
  double sigma = 0.0;     // Schweizer-Wolff
  double rho = 0.0;       // Spearman
  double tau = 0.0;       // Kendall
  double beta = 0.0;      // Blomqvist (medial)
  double gamma = 0.0;     // Gini
  double footrule = 0.0;  // Spearman's foot-rule
  MeasureProvenance provenance = MeasureProvenance::ClosedForm;
};

/// Largest componentwise absolute difference.
double max_abs_gap(const MeasureSet& a, const MeasureSet& b) noexcept;

}  // namespace nmcopula
