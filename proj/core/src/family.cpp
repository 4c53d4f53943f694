#include "nmcopula/family.hpp"

#include <cmath>

#include "nmcopula/measures.hpp"

namespace nmcopula {

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::NormalMode: return "normal_mode";
    case Family::Product: return "product";
    case Family::FrechetLower: return "frechet_lower";
    case Family::FrechetUpper: return "frechet_upper";
    case Family::AMH: return "amh";
    case Family::Clayton: return "clayton";
    case Family::Frank: return "frank";
    case Family::FGM: return "fgm";
    case Family::Gaussian: return "gaussian";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : kAllFamilies) {
    if (family_name(f) == name) return f;
  }
  if (name == "nm" || name == "normalmode") return Family::NormalMode;
  return std::nullopt;
}

bool has_density(Family family) noexcept {
  return family != Family::FrechetLower && family != Family::FrechetUpper;
}

bool is_archimedean(Family family) noexcept {
  return family == Family::AMH || family == Family::Clayton ||
         family == Family::Frank;
}

bool is_classical(Family family) noexcept {
  return is_archimedean(family) || family == Family::FGM ||
         family == Family::Gaussian;
}

bool requires_bivariate(Family family) noexcept {
  return family != Family::NormalMode && family != Family::Product &&
         family != Family::FrechetUpper;
}

std::string_view to_string(MeasureProvenance p) noexcept {
  switch (p) {
    case MeasureProvenance::ClosedForm: return "closed_form";
    case MeasureProvenance::Quadrature: return "quadrature";
    case MeasureProvenance::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

double max_abs_gap(const MeasureSet& a, const MeasureSet& b) noexcept {
  double gap = 0.0;
  gap = std::fmax(gap, std::abs(a.sigma - b.sigma));
  gap = std::fmax(gap, std::abs(a.rho - b.rho));
  gap = std::fmax(gap, std::abs(a.tau - b.tau));
  gap = std::fmax(gap, std::abs(a.beta - b.beta));
  gap = std::fmax(gap, std::abs(a.gamma - b.gamma));
  gap = std::fmax(gap, std::abs(a.footrule - b.footrule));
  return gap;
}

}  // namespace nmcopula
