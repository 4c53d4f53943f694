#pragma once

#include <span>
#include <string>
#include <vector>

#include "nmcopula/matrix.hpp"

namespace nmcopula {

/// N x D table of finite observations with column names.
class RawSample {
 public:
  /// Throws NonFiniteInput on NaN/inf entries and PreconditionViolated when
  /// N < 2 or the name count does not match. Empty names become x1..xD.
  RawSample(RowMatrix values, std::vector<std::string> names = {});

  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }
  const RowMatrix& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  RowMatrix values_;
  std::vector<std::string> names_;
};

/// Rank-based pseudo-observations, entries strictly inside (0, 1).
class PseudoSample {
 public:
  /// Wraps already-computed pseudo-observations; every entry must lie in
  /// (0, 1).
  explicit PseudoSample(RowMatrix u, std::vector<std::size_t> tie_counts = {});

  std::size_t size() const noexcept { return u_.rows(); }
  std::size_t dimension() const noexcept { return u_.cols(); }
  const RowMatrix& u() const noexcept { return u_; }
  double operator()(std::size_t i, std::size_t d) const noexcept {
    return u_(i, d);
  }
  /// Number of observations per column that share their value with another.
  const std::vector<std::size_t>& tie_counts() const noexcept {
    return tie_counts_;
  }

  /// The sample with row `i` removed.
  PseudoSample without_row(std::size_t i) const;

 private:
  RowMatrix u_;
  std::vector<std::size_t> tie_counts_;
};

/// u_{d,i} = average rank / (N + 1) with
/// average rank = (#{x_j <= x_i} + #{x_j < x_i} + 1) / 2.
PseudoSample pseudo_observations(const RawSample& raw);

/// (1/N) #{j : u_{1j} <= p1 and u_{2j} <= p2}; p must have D coordinates.
double empirical_copula(const PseudoSample& ps, std::span<const double> p);

/// Empirical copula evaluated at every pseudo-observation, O(N log N) for
/// D = 2.
std::vector<double> empirical_copula_at_sample(const PseudoSample& ps);

/// Leave-one-out pseudo-observation for row i:
///   (1/N) #{j != i : u_{dj} <= u_{di}}  if u_{di} >= min_{j != i} u_{dj},
///   1/N                                 otherwise.
std::vector<double> loo_pseudo(const PseudoSample& ps, std::size_t i);

/// loo_pseudo for every row at once (sort-based).
RowMatrix loo_pseudo_all(const PseudoSample& ps);

/// Type-7 empirical quantile (linear interpolation between order statistics
/// at h = (n - 1) q).
double empirical_quantile(std::span<const double> values, double q);

/// Drops every row in which some column lies strictly below that column's
/// lo-quantile or strictly above its hi-quantile. Throws EmptyAfterTrim when
/// nothing survives.
RawSample quantile_trim(const RawSample& raw, double lo = 0.01,
                        double hi = 0.99);

}  // namespace nmcopula
