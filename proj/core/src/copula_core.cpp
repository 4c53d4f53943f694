#include "nmcopula/copula_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nmcopula/classical.hpp"
#include "nmcopula/error.hpp"
#include "nmcopula/rng.hpp"
#include "nmcopula/root_finding.hpp"

namespace nmcopula {

namespace {

void require_dimension(const CopulaModel& m, std::size_t d) {
  if (static_cast<std::size_t>(m.dimension()) != d) {
    raise(ErrorCode::DimensionMismatch,
          m.describe() + " has dimension " + std::to_string(m.dimension()) +
              ", point has " + std::to_string(d));
  }
}

void require_bivariate(const CopulaModel& m) {
  if (m.dimension() != 2) {
    raise(ErrorCode::DimensionMismatch, m.describe() + " is not bivariate");
  }
}

void require_density(const CopulaModel& m) {
  if (!has_density(m.family()) ||
      (m.family() == Family::Gaussian && std::abs(m.theta()) >= 1.0)) {
    raise(ErrorCode::NoDensity, m.describe() + " has no density");
  }
}

void require_closed_unit(std::span<const double> u) {
  for (double x : u) {
    if (!(x >= 0.0 && x <= 1.0)) {
      raise(ErrorCode::DomainError,
            "copula argument outside [0, 1]: " + std::to_string(x));
    }
  }
}

void require_open_unit(std::span<const double> u) {
  for (double x : u) {
    if (!(x > 0.0 && x < 1.0)) {
      raise(ErrorCode::DomainError,
            "copula argument outside (0, 1): " + std::to_string(x));
    }
  }
}

double gaussian_cdf_closed(double theta, double u1, double u2) {
  // Closed-cube evaluation: 0 and 1 map to -inf and +inf normal scores.
  const auto score = [](double u) {
    if (u <= 0.0) return -std::numeric_limits<double>::infinity();
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    return inv_norm_cdf(u);
  };
  if (theta == 0.0) return u1 * u2;
  return bvn_cdf(score(u1), score(u2), theta);
}

// The family formula with no boundary shortcut; valid on the closed cube.
double cdf_formula(const CopulaModel& m, std::span<const double> u) {
  switch (m.family()) {
    case Family::NormalMode:
      return nm_cdf(m.normal_mode_params(), u);
    case Family::Product: {
      double prod = 1.0;
      for (double x : u) prod *= x;
      return prod;
    }
    case Family::FrechetLower:
      return std::max(u[0] + u[1] - 1.0, 0.0);
    case Family::FrechetUpper:
      return *std::min_element(u.begin(), u.end());
    case Family::Gaussian:
      return gaussian_cdf_closed(m.theta(), u[0], u[1]);
    default:
      return classical_cdf(m.family(), m.theta(), u[0], u[1]);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CopulaModel

CopulaModel CopulaModel::normal_mode(double theta, std::vector<int> kappa) {
  NormalModeParams p{theta, std::move(kappa)};
  return normal_mode(p);
}

CopulaModel CopulaModel::normal_mode(const NormalModeParams& params) {
  params.validate();
  return CopulaModel(Family::NormalMode, params.theta, params.kappa,
                     params.dimension());
}

CopulaModel CopulaModel::product(int dimension) {
  if (dimension < 2) {
    raise(ErrorCode::InvalidParameter, "copula dimension must be >= 2");
  }
  return CopulaModel(Family::Product, 0.0, {}, dimension);
}

CopulaModel CopulaModel::frechet_lower() {
  return CopulaModel(Family::FrechetLower, 0.0, {}, 2);
}

CopulaModel CopulaModel::frechet_upper(int dimension) {
  if (dimension < 2) {
    raise(ErrorCode::InvalidParameter, "copula dimension must be >= 2");
  }
  return CopulaModel(Family::FrechetUpper, 0.0, {}, dimension);
}

CopulaModel CopulaModel::amh(double theta) { return make(Family::AMH, theta); }
CopulaModel CopulaModel::clayton(double theta) {
  return make(Family::Clayton, theta);
}
CopulaModel CopulaModel::frank(double theta) {
  return make(Family::Frank, theta);
}
CopulaModel CopulaModel::fgm(double theta) { return make(Family::FGM, theta); }
CopulaModel CopulaModel::gaussian(double theta) {
  return make(Family::Gaussian, theta);
}

CopulaModel CopulaModel::make(Family family, double theta,
                              std::vector<int> kappa, int dimension) {
  switch (family) {
    case Family::NormalMode:
      if (kappa.empty()) kappa.assign(std::max(dimension, 2), 1);
      return normal_mode(theta, std::move(kappa));
    case Family::Product:
      return product(dimension);
    case Family::FrechetLower:
      if (dimension != 2) {
        raise(ErrorCode::DimensionMismatch,
              "the Frechet lower bound is a copula only for D = 2");
      }
      return frechet_lower();
    case Family::FrechetUpper:
      return frechet_upper(dimension);
    default:
      break;
  }
  if (dimension != 2) {
    raise(ErrorCode::DimensionMismatch,
          std::string(family_name(family)) + " copula requires D = 2");
  }
  validate_classical(family, theta);
  if (family == Family::Frank && theta == 0.0) return product(2);
  return CopulaModel(family, theta, {}, 2);
}

NormalModeParams CopulaModel::normal_mode_params() const {
  if (family_ != Family::NormalMode) {
    raise(ErrorCode::InvalidParameter, describe() + " is not a normal mode copula");
  }
  return NormalModeParams{theta_, kappa_};
}

std::string CopulaModel::describe() const {
  std::ostringstream os;
  os << family_name(family_);
  switch (family_) {
    case Family::NormalMode: {
      os << "(theta=" << theta_ << ", kappa=(";
      for (std::size_t i = 0; i < kappa_.size(); ++i) {
        os << (i ? "," : "") << kappa_[i];
      }
      os << "))";
      break;
    }
    case Family::Product:
    case Family::FrechetUpper:
      if (dimension_ != 2) os << "(D=" << dimension_ << ")";
      break;
    case Family::FrechetLower:
      break;
    default:
      os << "(theta=" << theta_ << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

double cdf(const CopulaModel& m, std::span<const double> u) {
  require_dimension(m, u.size());
  require_closed_unit(u);
  std::size_t ones = 0;
  std::size_t free_index = 0;
  for (std::size_t d = 0; d < u.size(); ++d) {
    if (u[d] == 0.0) return 0.0;
    if (u[d] == 1.0) {
      ++ones;
    } else {
      free_index = d;
    }
  }
  if (ones == u.size()) return 1.0;
  if (ones + 1 == u.size()) return u[free_index];
  return std::clamp(cdf_formula(m, u), 0.0, 1.0);
}

double cdf(const CopulaModel& m, double u1, double u2) {
  const double u[2] = {u1, u2};
  return cdf(m, u);
}

double density(const CopulaModel& m, std::span<const double> u) {
  require_dimension(m, u.size());
  require_density(m);
  require_open_unit(u);
  switch (m.family()) {
    case Family::NormalMode:
      return nm_density(m.normal_mode_params(), u);
    case Family::Product:
      return 1.0;
    default:
      return classical_density(m.family(), m.theta(), u[0], u[1]);
  }
}

double density(const CopulaModel& m, double u1, double u2) {
  const double u[2] = {u1, u2};
  return density(m, u);
}

double log_density(const CopulaModel& m, double u1, double u2) {
  require_bivariate(m);
  require_density(m);
  const double u[2] = {u1, u2};
  require_open_unit(u);
  switch (m.family()) {
    case Family::NormalMode:
      return std::log1p(m.theta() * nm_cosine_product(m.kappa(), u));
    case Family::Product:
      return 0.0;
    default:
      return classical_log_density(m.family(), m.theta(), u1, u2);
  }
}

double conditional_cdf(const CopulaModel& m, Margin d, double u1, double u2) {
  require_bivariate(m);
  require_density(m);
  const double u[2] = {u1, u2};
  require_closed_unit(u);
  const double ud = d == Margin::U1 ? u1 : u2;
  if (ud <= 0.0) return 0.0;
  if (ud >= 1.0) return 1.0;
  switch (m.family()) {
    case Family::NormalMode:
      return nm_conditional_cdf(m.normal_mode_params(), d, u1, u2);
    case Family::Product:
      return ud;
    default:
      return classical_conditional_cdf(m.family(), m.theta(), d, u1, u2);
  }
}

double generic_conditional_quantile(const CopulaModel& m, Margin d,
                                    double u_given, double prob) {
  require_bivariate(m);
  require_density(m);
  if (!(u_given > 0.0 && u_given < 1.0)) {
    raise(ErrorCode::DomainError, "conditioning value must lie in (0, 1)");
  }
  if (!(prob > 0.0 && prob < 1.0)) {
    raise(ErrorCode::DomainError, "probability must lie in (0, 1)");
  }
  const auto point = [&](double x) {
    return d == Margin::U1 ? std::pair{x, u_given} : std::pair{u_given, x};
  };
  auto f = [&](double x) {
    const auto [a, b] = point(x);
    return conditional_cdf(m, d, a, b);
  };
  auto slope = [&](double x) {
    const auto [a, b] = point(x);
    return density(m, a, b);
  };
  return invert_monotone(f, slope, prob);
}

double conditional_quantile(const CopulaModel& m, Margin d, double u_given,
                            double prob) {
  switch (m.family()) {
    case Family::NormalMode:
      require_bivariate(m);
      return nm_conditional_quantile(m.normal_mode_params(), d, u_given, prob);
    case Family::Product:
      require_bivariate(m);
      if (!(prob > 0.0 && prob < 1.0)) {
        raise(ErrorCode::DomainError, "probability must lie in (0, 1)");
      }
      return prob;
    default:
      return generic_conditional_quantile(m, d, u_given, prob);
  }
}

RowMatrix sample(const CopulaModel& m, std::size_t n, std::uint64_t seed) {
  if (n == 0) raise(ErrorCode::PreconditionViolated, "sample size must be >= 1");
  require_density(m);
  const std::size_t dim = static_cast<std::size_t>(m.dimension());
  RowMatrix out(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    auto row = out.row(i);
    switch (m.family()) {
      case Family::Product:
        for (auto& x : row) x = rng.uniform();
        break;
      case Family::NormalMode: {
        // The first D-1 coordinates are independent uniforms (each cosine
        // integrates to zero); the last has density 1 + a cos(kappa_D pi u)
        // with a = theta * prod of the other cosines.
        double amplitude = m.theta();
        for (std::size_t d = 0; d + 1 < dim; ++d) {
          row[d] = rng.uniform();
          amplitude *= std::cos(m.kappa()[d] * std::numbers::pi * row[d]);
        }
        row[dim - 1] = nm_axis_quantile(amplitude, m.kappa()[dim - 1],
                                        rng.uniform());
        break;
      }
      default: {
        row[0] = rng.uniform();
        row[1] = conditional_quantile(m, Margin::U2, row[0], rng.uniform());
      }
    }
  }
  return out;
}

double copula_volume(const CopulaModel& m, std::span<const double> lower,
                     std::span<const double> upper) {
  require_dimension(m, lower.size());
  require_dimension(m, upper.size());
  const std::size_t dim = lower.size();
  std::vector<double> corner(dim);
  double volume = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
    int lower_count = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      const bool use_lower = (mask >> d) & 1U;
      corner[d] = use_lower ? lower[d] : upper[d];
      lower_count += use_lower;
    }
    const double c = cdf(m, corner);
    volume += (lower_count % 2 == 0) ? c : -c;
  }
  return volume;
}

AxiomReport check_copula_axioms(const CopulaModel& m, std::size_t n_rectangles,
                                std::uint64_t seed) {
  AxiomReport report;
  report.rectangles = n_rectangles;
  const std::size_t dim = static_cast<std::size_t>(m.dimension());
  constexpr int kEdgePoints = 1000;

  // Boundary conditions are checked on the family formula itself, not on the
  // shortcut path cdf() takes for exact 0/1 coordinates.
  std::vector<double> u(dim);
  for (int k = 0; k < kEdgePoints; ++k) {
    const double t = static_cast<double>(k) / (kEdgePoints - 1);
    for (std::size_t d = 0; d < dim; ++d) {
      std::fill(u.begin(), u.end(), 1.0);
      u[d] = t;
      report.max_boundary_error =
          std::max(report.max_boundary_error, std::abs(cdf_formula(m, u) - t));
      std::fill(u.begin(), u.end(), t);
      u[d] = 0.0;
      report.max_boundary_error =
          std::max(report.max_boundary_error, std::abs(cdf_formula(m, u)));
      std::fill(u.begin(), u.end(), 1.0);
      u[d] = 0.0;
      report.max_boundary_error =
          std::max(report.max_boundary_error, std::abs(cdf_formula(m, u)));
    }
  }

  CounterRng rng(seed);
  std::vector<double> lo(dim), hi(dim);
  report.min_volume = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < n_rectangles; ++r) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double a = rng.uniform();
      const double b = rng.uniform();
      lo[d] = std::min(a, b);
      hi[d] = std::max(a, b);
    }
    report.min_volume = std::min(report.min_volume, copula_volume(m, lo, hi));
  }
  if (n_rectangles == 0) report.min_volume = 0.0;
  return report;
}

std::string_view to_string(ConcordanceVerdict v) noexcept {
  switch (v) {
    case ConcordanceVerdict::ABelowB: return "A_below_B";
    case ConcordanceVerdict::BBelowA: return "B_below_A";
    case ConcordanceVerdict::Equal: return "equal";
    case ConcordanceVerdict::Incomparable: return "incomparable";
  }
  return "unknown";
}

ConcordanceResult concordance_compare(const CopulaModel& a,
                                      const CopulaModel& b, int grid_n) {
  require_bivariate(a);
  require_bivariate(b);
  if (grid_n < 1) raise(ErrorCode::PreconditionViolated, "grid_n must be >= 1");
  constexpr double kTol = 1e-12;
  ConcordanceResult out;
  out.max_a_minus_b = -std::numeric_limits<double>::infinity();
  out.max_b_minus_a = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid_n; ++i) {
    const double u1 = static_cast<double>(i) / (grid_n + 1);
    for (int j = 1; j <= grid_n; ++j) {
      const double u2 = static_cast<double>(j) / (grid_n + 1);
      const double diff = cdf(a, u1, u2) - cdf(b, u1, u2);
      out.max_a_minus_b = std::max(out.max_a_minus_b, diff);
      out.max_b_minus_a = std::max(out.max_b_minus_a, -diff);
    }
  }
  const bool a_above = out.max_a_minus_b > kTol;
  const bool b_above = out.max_b_minus_a > kTol;
  if (!a_above && !b_above) {
    out.verdict = ConcordanceVerdict::Equal;
  } else if (!a_above) {
    out.verdict = ConcordanceVerdict::ABelowB;
  } else if (!b_above) {
    out.verdict = ConcordanceVerdict::BBelowA;
  } else {
    out.verdict = ConcordanceVerdict::Incomparable;
  }
  return out;
}

}  // namespace nmcopula
