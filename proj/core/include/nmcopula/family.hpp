#pragma once

#include <optional>
#include <string_view>

namespace nmcopula {

enum class Family {
  NormalMode,
  Product,
  FrechetLower,
  FrechetUpper,
  AMH,
  Clayton,
  Frank,
  FGM,
  Gaussian,
};

inline constexpr Family kAllFamilies[] = {
    Family::NormalMode, Family::Product, Family::FrechetLower,
    Family::FrechetUpper, Family::AMH, Family::Clayton,
    Family::Frank, Family::FGM, Family::Gaussian,
};

/// The six families compared in the model-selection pipeline.
inline constexpr Family kFittedFamilies[] = {
    Family::NormalMode, Family::AMH, Family::Clayton,
    Family::FGM, Family::Frank, Family::Gaussian,
};

std::string_view family_name(Family family) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

bool has_density(Family family) noexcept;
bool is_archimedean(Family family) noexcept;
bool is_classical(Family family) noexcept;
bool requires_bivariate(Family family) noexcept;

/// Which coordinate a conditional distribution is taken over. Margin::U2 is
/// the law of U2 given U1, i.e. dC/du1.
enum class Margin { U1, U2 };

constexpr Margin other(Margin m) noexcept {
  return m == Margin::U1 ? Margin::U2 : Margin::U1;
}

}  // namespace nmcopula
