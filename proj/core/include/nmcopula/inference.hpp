#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nmcopula/copula_core.hpp"
#include "nmcopula/empirical.hpp"
#include "nmcopula/family.hpp"

namespace nmcopula {

/// A family to fit: structural choices (kappa for the normal mode family)
/// and the theta search interval.
struct FamilySpec {
  Family family = Family::NormalMode;
  std::vector<int> kappa{};
  double lower = -1.0;
  double upper = 1.0;

  /// Default search interval per family: [-1, 1] for NormalMode, AMH, FGM;
  /// [-1 + 1e-9, 1 - 1e-9] for Gaussian; [1e-6, 50] for Clayton; [-50, 50]
  /// for Frank.
  static FamilySpec defaults(Family family, std::vector<int> kappa = {});

  /// "normal_mode(2,1)", "clayton", ...
  std::string label() const;

  CopulaModel model(double theta) const;
  void validate() const;
};

/// The six fitted families of the comparison; the normal mode entry uses
/// `kappa`.
std::vector<FamilySpec> standard_specs(std::vector<int> kappa);

struct FitResult {
  double theta_hat = 0.0;
  double loglik = 0.0;
  bool at_boundary = false;
  bool flat = false;
  bool converged = true;
  int evaluations = 0;
  std::vector<std::string> warnings;
};

/// Pseudo-log-likelihood sum_i log c(u_i | theta) for one family, with
/// per-family precomputation so repeated evaluation (optimisation, leave-one-
/// out refits) is cheap.
class PseudoLikelihood {
 public:
  PseudoLikelihood(const FamilySpec& spec, const PseudoSample& ps);

  double operator()(double theta) const { return value(theta, {}); }
  /// Sum over every row except `skip`.
  double value(double theta, std::optional<std::size_t> skip) const;
  double term(std::size_t i, double theta) const;

  FitResult maximize(std::optional<double> warm_start = {},
                     std::optional<std::size_t> skip = {}) const;

  const FamilySpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return u1_.size(); }

 private:
  FamilySpec spec_;
  std::vector<double> u1_, u2_;
  std::vector<double> a_;  // NormalMode cosine products / FGM (1-2u1)(1-2u2)
  std::vector<double> x1_, x2_;  // Gaussian normal scores
  double sum_sq_ = 0.0, sum_cross_ = 0.0;
};

/// Maximum pseudo-likelihood estimate over the spec's interval, to 1e-8 in
/// theta. Boundary maxima carry at_boundary; a normal mode likelihood with
/// every cosine product ~ 0 returns theta = 0 with `flat`.
FitResult fit_mple(const FamilySpec& spec, const PseudoSample& ps);

/// sum_i (C(u_i | theta) - C_emp(u_i))^2 over all pseudo-observations.
double cvm_criterion(const CopulaModel& model, const PseudoSample& ps);
double cvm_criterion(const CopulaModel& model, const PseudoSample& ps,
                     std::span<const double> empirical_at_sample);

/// 2k - 2 loglik.
double aic(double loglik, int k = 1);

struct CicResult {
  double cic = 0.0;        // (1/N) sum_i log c(u_{-i} | theta_{-i}); larger is better
  double neg2n_cic = 0.0;  // -2N cic, comparable with AIC
  std::vector<double> fold_theta;
};

struct CicOptions {
  /// Full-sample estimate used to warm-start every fold refit.
  std::optional<double> warm_start;
  /// Worker threads for the folds; results are reduced in index order so the
  /// value does not depend on this.
  unsigned threads = 1;
};

/// Leave-one-out cross-validated copula information criterion. Fold i refits
/// theta on the other N - 1 pseudo-observations and scores the held-out unit
/// at its leave-one-out pseudo-observation.
CicResult cic(const FamilySpec& spec, const PseudoSample& ps,
              const CicOptions& opt = {});

enum class Criterion { CvMC, AIC, CIC };

std::string_view to_string(Criterion c) noexcept;

struct FitReport {
  std::string label;
  Family family = Family::NormalMode;
  std::vector<int> kappa;
  double theta_hat = 0.0;
  double loglik = 0.0;
  double cvmc = 0.0;
  double aic = 0.0;
  double cic = 0.0;
  double neg2n_cic = 0.0;
  std::size_t n = 0;
  std::vector<std::string> flags;  // "boundary", "flat", "not_converged"

  double score(Criterion c) const noexcept;  // lower is better for all three
};

struct Comparison {
  /// Reports sorted ascending by the chosen criterion.
  std::vector<FitReport> reports;
  /// Labels in ascending order of each criterion.
  std::vector<std::string> rank_cvmc, rank_aic, rank_cic;
  std::vector<std::string> warnings;
};

struct CompareOptions {
  Criterion criterion = Criterion::CIC;
  unsigned threads = 1;
};

/// Fits every spec, evaluates CvMC, AIC and -2N CIC, and ranks. Disagreement
/// between the criteria' winners is reported as a warning.
Comparison compare_models(const std::vector<FamilySpec>& specs,
                          const PseudoSample& ps,
                          const CompareOptions& opt = {});

}  // namespace nmcopula
