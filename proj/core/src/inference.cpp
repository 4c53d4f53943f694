#include "nmcopula/inference.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "nmcopula/classical.hpp"
#include "nmcopula/error.hpp"
#include "nmcopula/normal_mode.hpp"
#include "nmcopula/optimize.hpp"

namespace nmcopula {

namespace {

constexpr double kTolerance = 1e-8;
constexpr double kFlatThreshold = 1e-12;

bool is_log1p_linear(Family f) {
  return f == Family::NormalMode || f == Family::FGM;
}

double gaussian_term(double rho, double x1, double x2) {
  const double r2 = 1.0 - rho * rho;
  return -0.5 * std::log(r2) -
         (rho * rho * (x1 * x1 + x2 * x2) - 2.0 * rho * x1 * x2) / (2.0 * r2);
}

// Runs body(i) for i in [0, n) on up to `threads` workers. Every index is
// handled exactly once; the caller reduces results in index order.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// FamilySpec

FamilySpec FamilySpec::defaults(Family family, std::vector<int> kappa) {
  FamilySpec s;
  s.family = family;
  switch (family) {
    case Family::NormalMode:
      s.kappa = kappa.empty() ? std::vector<int>{1, 1} : std::move(kappa);
      break;
    case Family::Gaussian:
      s.lower = -1.0 + 1e-9;
      s.upper = 1.0 - 1e-9;
      break;
    case Family::Clayton:
      s.lower = 1e-6;
      s.upper = 50.0;
      break;
    case Family::Frank:
      s.lower = -50.0;
      s.upper = 50.0;
      break;
    default:
      break;
  }
  return s;
}

std::string FamilySpec::label() const {
  std::string out(family_name(family));
  if (family == Family::NormalMode) {
    out += "(";
    for (std::size_t i = 0; i < kappa.size(); ++i) {
      out += (i ? "," : "") + std::to_string(kappa[i]);
    }
    out += ")";
  }
  return out;
}

CopulaModel FamilySpec::model(double theta) const {
  return CopulaModel::make(family, theta, kappa);
}

void FamilySpec::validate() const {
  if (std::ranges::find(kFittedFamilies, family) == std::end(kFittedFamilies)) {
    raise(ErrorCode::InvalidParameter,
          std::string(family_name(family)) + " has no parameter to fit");
  }
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    raise(ErrorCode::InvalidParameter, label() + ": search interval must be finite with lower < upper");
  }
  bool inside = true;
  switch (family) {
    case Family::NormalMode:
      if (kappa.size() != 2) {
        raise(ErrorCode::InvalidParameter, "fitting needs a bivariate kappa");
      }
      NormalModeParams{0.0, kappa}.validate();
      [[fallthrough]];
    case Family::AMH:
    case Family::FGM:
      inside = lower >= -1.0 && upper <= 1.0;
      break;
    case Family::Gaussian:
      inside = lower > -1.0 && upper < 1.0;
      break;
    case Family::Clayton:
      inside = lower > 0.0;
      break;
    default:
      break;
  }
  if (!inside) {
    raise(ErrorCode::InvalidParameter,
          label() + ": search interval leaves the parameter domain");
  }
}

std::vector<FamilySpec> standard_specs(std::vector<int> kappa) {
  std::vector<FamilySpec> out;
  for (Family f : kFittedFamilies) {
    out.push_back(FamilySpec::defaults(f, f == Family::NormalMode ? kappa : std::vector<int>{}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// PseudoLikelihood

PseudoLikelihood::PseudoLikelihood(const FamilySpec& spec, const PseudoSample& ps)
    : spec_(spec) {
  spec_.validate();
  if (ps.dimension() != 2) {
    raise(ErrorCode::DimensionMismatch, "pseudo-likelihood needs bivariate data");
  }
  const std::size_t n = ps.size();
  u1_ = ps.u().column(0);
  u2_ = ps.u().column(1);
  switch (spec_.family) {
    case Family::NormalMode:
      a_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        a_[i] = nm_cosine_product(spec_.kappa, ps.u().row(i));
      }
      break;
    case Family::FGM:
      a_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        a_[i] = (1.0 - 2.0 * u1_[i]) * (1.0 - 2.0 * u2_[i]);
      }
      break;
    case Family::Gaussian:
      x1_.resize(n);
      x2_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        x1_[i] = inv_norm_cdf(u1_[i]);
        x2_[i] = inv_norm_cdf(u2_[i]);
        sum_sq_ += x1_[i] * x1_[i] + x2_[i] * x2_[i];
        sum_cross_ += x1_[i] * x2_[i];
      }
      break;
    default:
      break;
  }
}

double PseudoLikelihood::term(std::size_t i, double theta) const {
  if (i >= size()) raise(ErrorCode::IndexOutOfRange, "row index out of range");
  if (is_log1p_linear(spec_.family)) return std::log1p(theta * a_[i]);
  if (spec_.family == Family::Gaussian) return gaussian_term(theta, x1_[i], x2_[i]);
  return classical_log_density(spec_.family, theta, u1_[i], u2_[i]);
}

double PseudoLikelihood::value(double theta, std::optional<std::size_t> skip) const {
  const std::size_t n = size();
  if (spec_.family == Family::Gaussian) {
    const double r2 = 1.0 - theta * theta;
    double sq = sum_sq_, cross = sum_cross_;
    double count = static_cast<double>(n);
    if (skip) {
      sq -= x1_[*skip] * x1_[*skip] + x2_[*skip] * x2_[*skip];
      cross -= x1_[*skip] * x2_[*skip];
      count -= 1.0;
    }
    return -0.5 * count * std::log(r2) -
           (theta * theta * sq - 2.0 * theta * cross) / (2.0 * r2);
  }
  double sum = 0.0;
  if (is_log1p_linear(spec_.family)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i != skip) sum += std::log1p(theta * a_[i]);
    }
    return sum;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i != skip) sum += classical_log_density(spec_.family, theta, u1_[i], u2_[i]);
  }
  return sum;
}

FitResult PseudoLikelihood::maximize(std::optional<double> warm_start,
                                     std::optional<std::size_t> skip) const {
  FitResult out;
  if (is_log1p_linear(spec_.family)) {
    double largest = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i != skip) largest = std::max(largest, std::abs(a_[i]));
    }
    if (largest <= kFlatThreshold) {
      out.theta_hat = 0.0;
      out.loglik = value(0.0, skip);
      out.flat = true;
      out.warnings.push_back(spec_.label() + ": likelihood is flat in theta");
      return out;
    }
    const auto m = maximize_log1p_linear(a_, spec_.lower, spec_.upper,
                                         warm_start, kTolerance, skip);
    out.theta_hat = m.argmax;
    out.loglik = m.value;
    out.at_boundary = m.at_boundary;
    out.converged = m.converged;
    out.evaluations = m.evaluations;
  } else {
    const auto m = maximize_scalar([&](double t) { return value(t, skip); },
                                   spec_.lower, spec_.upper, warm_start,
                                   ScalarSearchOptions{kTolerance});
    out.theta_hat = m.argmax;
    out.loglik = m.value;
    out.at_boundary = m.at_boundary;
    out.converged = m.converged;
    out.evaluations = m.evaluations;
  }
  if (!std::isfinite(out.loglik)) {
    raise(ErrorCode::NonFiniteLikelihood, spec_.label() + ": log-likelihood is not finite at the optimum");
  }
  if (out.at_boundary) {
    std::ostringstream os;
    os << spec_.label() << ": theta_hat = " << out.theta_hat
       << " lies on the search boundary";
    out.warnings.push_back(os.str());
  }
  if (!out.converged) out.warnings.push_back(spec_.label() + ": optimizer did not converge");
  return out;
}

FitResult fit_mple(const FamilySpec& spec, const PseudoSample& ps) {
  PseudoLikelihood pl(spec, ps);
  auto fit = pl.maximize();
  if (ps.size() < 10) {
    fit.warnings.push_back(spec.label() + ": fewer than 10 observations");
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Goodness of fit

double cvm_criterion(const CopulaModel& model, const PseudoSample& ps,
                     std::span<const double> empirical_at_sample) {
  if (model.dimension() != 2 || ps.dimension() != 2) {
    raise(ErrorCode::DimensionMismatch, "CvM criterion is bivariate");
  }
  if (empirical_at_sample.size() != ps.size()) {
    raise(ErrorCode::DimensionMismatch, "empirical copula values do not match the sample");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double diff = cdf(model, ps(i, 0), ps(i, 1)) - empirical_at_sample[i];
    sum += diff * diff;
  }
  return sum;
}

double cvm_criterion(const CopulaModel& model, const PseudoSample& ps) {
  if (ps.dimension() != 2) raise(ErrorCode::DimensionMismatch, "CvM criterion is bivariate");
  const auto emp = empirical_copula_at_sample(ps);
  return cvm_criterion(model, ps, emp);
}

double aic(double loglik, int k) { return 2.0 * k - 2.0 * loglik; }

// ---------------------------------------------------------------------------
// Cross-validated information criterion

namespace {

// Full-sample score S(theta) = sum_i l_i'(theta) on a short interval, as a
// Chebyshev interpolant. A fold then solves S(theta) - l_i'(theta) = 0 with
// O(1) work per evaluation.
class ScoreChebyshev {
 public:
  static constexpr int kNodes = 32;

  ScoreChebyshev(const PseudoLikelihood& pl, double lo, double hi, double scale)
      : pl_(pl), lo_(lo), hi_(hi), scale_(scale) {
    std::vector<double> f(kNodes);
    for (int j = 0; j < kNodes; ++j) {
      f[j] = full_score(map(std::cos(std::numbers::pi * (j + 0.5) / kNodes)));
    }
    c_.assign(kNodes, 0.0);
    for (int k = 0; k < kNodes; ++k) {
      double sum = 0.0;
      for (int j = 0; j < kNodes; ++j) {
        sum += f[j] * std::cos(std::numbers::pi * k * (j + 0.5) / kNodes);
      }
      c_[k] = 2.0 * sum / kNodes;
    }
    c_[0] /= 2.0;
    // Spot checks between nodes; a poor fit disables the interpolant.
    ok_ = true;
    for (double x : {-0.97, -0.31, 0.52}) {
      const double direct = full_score(map(x));
      ok_ = ok_ && std::isfinite(direct) &&
            std::abs(direct - (*this)(map(x))) <= 1e-9 * (abs_scale_ + 1.0);
    }
  }

  bool ok() const { return ok_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  double operator()(double theta) const {
    const double x = (2.0 * theta - lo_ - hi_) / (hi_ - lo_);
    double b1 = 0.0, b2 = 0.0;
    for (int k = kNodes - 1; k >= 1; --k) {
      const double b = 2.0 * x * b1 - b2 + c_[k];
      b2 = b1;
      b1 = b;
    }
    return x * b1 - b2 + c_[0];
  }

  // d/dtheta of one term: a five-point central stencil where it fits inside
  // the search interval, one-sided on the bound itself.
  double term_slope(std::size_t i, double theta) const {
    const auto& s = pl_.spec();
    const double room = std::min(theta - s.lower, s.upper - theta);
    const double h = std::min(1e-4 * scale_, room / 2.5);
    if (h >= 1e-9 * scale_) {
      return (8 * (pl_.term(i, theta + h) - pl_.term(i, theta - h)) -
              (pl_.term(i, theta + 2 * h) - pl_.term(i, theta - 2 * h))) /
             (12 * h);
    }
    const double dir = theta - s.lower <= s.upper - theta ? 1.0 : -1.0;
    const double k = 1e-5 * scale_;
    return dir *
           (-3 * pl_.term(i, theta) + 4 * pl_.term(i, theta + dir * k) -
            pl_.term(i, theta + 2 * dir * k)) /
           (2 * k);
  }

 private:
  double map(double x) const { return 0.5 * (lo_ + hi_) + 0.5 * (hi_ - lo_) * x; }

  double full_score(double theta) {
    double sum = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < pl_.size(); ++i) {
      const double d = term_slope(i, theta);
      sum += d;
      mag += std::abs(d);
    }
    abs_scale_ = std::max(abs_scale_, mag);
    return sum;
  }

  const PseudoLikelihood& pl_;
  double lo_, hi_, scale_;
  double abs_scale_ = 0.0;
  bool ok_ = false;
  std::vector<double> c_;
};

// Leave-one-out refits for families optimised numerically. Every fold
// objective is the full objective minus one term, so per-term derivatives at
// theta_hat (five-point stencils: step 1e-3 for the first two, 1e-2 for the
// third and fourth; narrower steps let rounding in theta-dependent constants,
// which is coherent across terms, dominate the sums)
// give each fold a quartic Taylor model in O(1). The fold optimum is the root
// of the model's cubic score. A fold falls back to the exact maximiser when
// the step is large (1e-2, or a tenth of the distance to the nearer bound) or
// the cubic term moves theta by more than 1e-6, which keeps the neglected
// quintic term well below the 1e-8 tolerance.
// Near a bound the steps shrink so the stencil stays inside the interval.
// When theta_hat sits on a bound, a fold stays there if its one-sided score
// points clearly outward. Within 0.1 of a bound the interpolated score is
// tried first.
class FoldRefitter {
 public:
  FoldRefitter(const PseudoLikelihood& pl, double theta_hat)
      : pl_(pl), theta_(theta_hat), scale_(std::max(1.0, std::abs(theta_hat))) {
    const auto& s = pl.spec();
    const std::size_t n = pl.size();
    const double room = std::min(theta_ - s.lower, s.upper - theta_);
    if (room < 0.1 * scale_) {
      cheb_.emplace(pl, std::max(s.lower, theta_ - 0.05 * scale_),
                    std::min(s.upper, theta_ + 0.05 * scale_), scale_);
      if (!cheb_->ok()) cheb_.reset();
    }
    if (room <= 1e-12 * scale_) {
      side_ = theta_ - s.lower <= s.upper - theta_ ? 1.0 : -1.0;
      const double h = 1e-5 * scale_;
      d1_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double f0 = pl.term(i, theta_);
        const double f1 = pl.term(i, theta_ + side_ * h);
        const double f2 = pl.term(i, theta_ + 2 * side_ * h);
        d1_[i] = side_ * (-3 * f0 + 4 * f1 - f2) / (2 * h);
        sum1_ += d1_[i];
        abs1_ += std::abs(d1_[i]);
      }
      usable_ = std::isfinite(sum1_) && std::isfinite(abs1_);
      return;
    }
    const double w = std::min(1e-2 * scale_, room / 2.5);
    const double h = std::min(1e-3 * scale_, w / 10);
    // Below this the fourth difference is mostly rounding.
    usable_ = w >= 1e-4 * scale_;
    if (!usable_) return;
    max_step_ = std::min(1e-2 * scale_, room / 10);
    d1_.resize(n);
    d2_.resize(n);
    d3_.resize(n);
    d4_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double f0 = pl.term(i, theta_);
      const double fp = pl.term(i, theta_ + h), fm = pl.term(i, theta_ - h);
      const double fp2 = pl.term(i, theta_ + 2 * h), fm2 = pl.term(i, theta_ - 2 * h);
      const double p1 = pl.term(i, theta_ + w), m1 = pl.term(i, theta_ - w);
      const double p2 = pl.term(i, theta_ + 2 * w), m2 = pl.term(i, theta_ - 2 * w);
      d1_[i] = (8 * (fp - fm) - (fp2 - fm2)) / (12 * h);
      d2_[i] = (16 * (fp + fm) - (fp2 + fm2) - 30 * f0) / (12 * h * h);
      d3_[i] = (p2 - 2 * p1 + 2 * m1 - m2) / (2 * w * w * w);
      d4_[i] = (p2 - 4 * p1 + 6 * f0 - 4 * m1 + m2) / (w * w * w * w);
      sum1_ += d1_[i];
      sum2_ += d2_[i];
      sum3_ += d3_[i];
      sum4_ += d4_[i];
    }
    usable_ = std::isfinite(sum1_) && std::isfinite(sum2_) &&
              std::isfinite(sum3_) && std::isfinite(sum4_);
  }

  double refit(std::size_t i) const {
    if (cheb_) {
      if (const auto t = interpolated_refit(i)) return *t;
    }
    if (usable_) {
      if (const auto t = model_refit(i)) return *t;
    }
    return pl_.maximize(theta_, i).theta_hat;
  }

 private:
  std::optional<double> interpolated_refit(std::size_t i) const {
    const auto& spec = pl_.spec();
    const auto& c = *cheb_;
    const auto g = [&](double t) { return c(t) - c.term_slope(i, t); };
    double a = c.lo(), b = c.hi();
    double ga = g(a), gb = g(b);
    if (!std::isfinite(ga) || !std::isfinite(gb)) return std::nullopt;
    if (a == spec.lower && ga <= 0.0) return a;
    if (b == spec.upper && gb >= 0.0) return b;
    if (!(ga > 0.0 && gb < 0.0)) return std::nullopt;
    // Illinois false position on the bracket.
    int last = 0;
    for (int iter = 0; iter < 200 && b - a > 1e-13 * scale_; ++iter) {
      double t = (a * gb - b * ga) / (gb - ga);
      if (!(t > a && t < b)) t = 0.5 * (a + b);
      const double gt = g(t);
      if (gt > 0.0) {
        a = t;
        ga = gt;
        if (last == 1) gb /= 2;
        last = 1;
      } else {
        b = t;
        gb = gt;
        if (last == -1) ga /= 2;
        last = -1;
      }
    }
    return 0.5 * (a + b);
  }

  std::optional<double> model_refit(std::size_t i) const {
    if (side_ != 0.0) {
      // Fold score at the bound, signed so that positive points inward.
      const double g = side_ * (sum1_ - d1_[i]);
      if (g < -1e-7 * abs1_) return theta_;
      return std::nullopt;
    }
    const double g = sum1_ - d1_[i];
    const double c2 = sum2_ - d2_[i];
    const double c3 = sum3_ - d3_[i];
    const double c4 = sum4_ - d4_[i];
    if (!(c2 < 0.0)) return std::nullopt;
    const auto score = [&](double s) { return g + s * (c2 + s * (c3 / 2 + s * c4 / 6)); };
    const auto slope = [&](double s) { return c2 + s * (c3 + s * c4 / 2); };
    double s = -g / c2;
    for (int iter = 0; iter < 20; ++iter) {
      const double d = slope(s);
      if (!(d < 0.0)) return std::nullopt;
      const double step = -score(s) / d;
      s += step;
      if (std::abs(step) <= 1e-15 * scale_) break;
    }
    const double cubic_shift = std::abs(c4 * s * s * s / 6) / std::abs(c2);
    if (std::abs(s) > max_step_ || cubic_shift > 1e-6) return std::nullopt;
    const double t = theta_ + s;
    const auto& spec = pl_.spec();
    if (!(t > spec.lower && t < spec.upper)) return std::nullopt;
    return t;
  }

  const PseudoLikelihood& pl_;
  double theta_;
  double scale_;
  bool usable_ = false;
  double max_step_ = 0.0;
  double side_ = 0.0;  // +1 on the lower bound, -1 on the upper, 0 inside
  std::vector<double> d1_, d2_, d3_, d4_;
  double sum1_ = 0.0, sum2_ = 0.0, sum3_ = 0.0, sum4_ = 0.0, abs1_ = 0.0;
  std::optional<ScoreChebyshev> cheb_;
};

}  // namespace

CicResult cic(const FamilySpec& spec, const PseudoSample& ps, const CicOptions& opt) {
  PseudoLikelihood pl(spec, ps);
  const std::size_t n = ps.size();
  if (n < 3) raise(ErrorCode::PreconditionViolated, "CIC needs at least 3 observations");
  const double theta_hat = opt.warm_start ? *opt.warm_start : pl.maximize().theta_hat;
  const RowMatrix loo = loo_pseudo_all(ps);

  CicResult out;
  out.fold_theta.assign(n, 0.0);
  std::vector<double> scores(n, 0.0);

  std::optional<FoldRefitter> refitter;
  if (!is_log1p_linear(spec.family) && spec.family != Family::Gaussian) {
    refitter.emplace(pl, theta_hat);
  }

  parallel_for(n, opt.threads, [&](std::size_t i) {
    double t;
    if (refitter) {
      t = refitter->refit(i);
    } else {
      t = pl.maximize(theta_hat, i).theta_hat;
    }
    out.fold_theta[i] = t;
    const auto model = spec.model(t);
    scores[i] = log_density(model, loo(i, 0), loo(i, 1));
  });

  double sum = 0.0;
  for (double s : scores) sum += s;
  if (!std::isfinite(sum)) {
    raise(ErrorCode::NonFiniteLikelihood, spec.label() + ": a CIC fold produced a non-finite score");
  }
  out.cic = sum / static_cast<double>(n);
  out.neg2n_cic = -2.0 * static_cast<double>(n) * out.cic;
  return out;
}

// ---------------------------------------------------------------------------
// Comparison

std::string_view to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::CvMC: return "cvmc";
    case Criterion::AIC: return "aic";
    case Criterion::CIC: return "cic";
  }
  return "unknown";
}

double FitReport::score(Criterion c) const noexcept {
  switch (c) {
    case Criterion::CvMC: return cvmc;
    case Criterion::AIC: return aic;
    case Criterion::CIC: return neg2n_cic;
  }
  return 0.0;
}

Comparison compare_models(const std::vector<FamilySpec>& specs,
                          const PseudoSample& ps, const CompareOptions& opt) {
  if (specs.size() < 2) {
    raise(ErrorCode::PreconditionViolated, "comparison needs at least 2 families");
  }
  if (ps.dimension() != 2) raise(ErrorCode::DimensionMismatch, "comparison needs bivariate data");
  const auto emp = empirical_copula_at_sample(ps);
  Comparison out;
  for (const auto& spec : specs) {
    const auto fit = fit_mple(spec, ps);
    FitReport r;
    r.label = spec.label();
    r.family = spec.family;
    r.kappa = spec.kappa;
    r.theta_hat = fit.theta_hat;
    r.loglik = fit.loglik;
    r.cvmc = cvm_criterion(spec.model(fit.theta_hat), ps, emp);
    r.aic = aic(fit.loglik);
    const auto c = cic(spec, ps, CicOptions{fit.theta_hat, opt.threads});
    r.cic = c.cic;
    r.neg2n_cic = c.neg2n_cic;
    r.n = ps.size();
    if (fit.at_boundary) r.flags.emplace_back("boundary");
    if (fit.flat) r.flags.emplace_back("flat");
    if (!fit.converged) r.flags.emplace_back("not_converged");
    out.warnings.insert(out.warnings.end(), fit.warnings.begin(), fit.warnings.end());
    out.reports.push_back(std::move(r));
  }

  const auto ranking = [&](Criterion c) {
    std::vector<std::size_t> idx(out.reports.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return out.reports[a].score(c) < out.reports[b].score(c);
    });
    std::vector<std::string> labels;
    for (std::size_t k : idx) labels.push_back(out.reports[k].label);
    return labels;
  };
  out.rank_cvmc = ranking(Criterion::CvMC);
  out.rank_aic = ranking(Criterion::AIC);
  out.rank_cic = ranking(Criterion::CIC);
  if (out.rank_cvmc.front() != out.rank_aic.front() ||
      out.rank_aic.front() != out.rank_cic.front()) {
    out.warnings.push_back("criteria disagree on the best family: cvmc -> " +
                           out.rank_cvmc.front() + ", aic -> " + out.rank_aic.front() +
                           ", -2N cic -> " + out.rank_cic.front());
  }
  std::stable_sort(out.reports.begin(), out.reports.end(),
                   [&](const FitReport& a, const FitReport& b) {
                     return a.score(opt.criterion) < b.score(opt.criterion);
                   });
  return out;
}

}  // namespace nmcopula
