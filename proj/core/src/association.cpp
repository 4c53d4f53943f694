#include "nmcopula/association.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmcopula/error.hpp"
#include "nmcopula/quadrature.hpp"

namespace nmcopula {

namespace {

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

// Families whose integrands vary on a log scale near the corners of the square.
bool corner_sensitive(const CopulaModel& m) {
  switch (m.family()) {
    case Family::AMH:
    case Family::Clayton:
    case Family::Frank:
    case Family::Gaussian:
      return true;
    default:
      return false;
  }
}

QuadratureRule axis_rule(const QuadSpec& q, std::vector<double> breaks,
                         bool cluster = false) {
  for (int k = 1; k < 8; ++k) breaks.push_back(k / 8.0);
  auto rule = composite_gauss_legendre(breaks, std::max(4, q.nodes / 8));
  if (!cluster) return rule;
  // u = t^p / (t^p + (1 - t)^p) packs nodes against both ends. The callers
  // that cluster have no interior breakpoints, so the panels stay in t.
  constexpr double p = 3.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    const double a = std::pow(t, p), b = std::pow(1.0 - t, p);
    rule.nodes[i] = std::min(a / (a + b), std::nextafter(1.0, 0.0));
    rule.weights[i] *= p * std::pow(t * (1.0 - t), p - 1.0) / ((a + b) * (a + b));
  }
  return rule;
}

// Average ranks 1..n (ties share their mean rank).
std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && x[order[end]] == x[order[start]]) ++end;
    const double avg = 0.5 * static_cast<double>(start + end + 1);
    for (std::size_t k = start; k < end; ++k) r[order[k]] = avg;
    start = end;
  }
  return r;
}

void require_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) raise(ErrorCode::DimensionMismatch, "x and y differ in length");
  if (x.size() < 2) raise(ErrorCode::PreconditionViolated, "need at least 2 pairs");
}

// Counts inversions of v while sorting it (merge sort).
std::uint64_t count_swaps(std::vector<double>& v, std::vector<double>& buf,
                          std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = count_swaps(v, buf, lo, mid) + count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

std::uint64_t tied_pairs(const std::vector<double>& sorted) {
  std::uint64_t pairs = 0;
  std::size_t start = 0;
  while (start < sorted.size()) {
    std::size_t end = start + 1;
    while (end < sorted.size() && sorted[end] == sorted[start]) ++end;
    const std::uint64_t t = end - start;
    pairs += t * (t - 1) / 2;
    start = end;
  }
  return pairs;
}

struct SampleMeasures {
  double sigma, rho, tau, beta, gamma, footrule;
};

SampleMeasures sample_measures(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double nd = static_cast<double>(n);
  const auto r = average_ranks(x);
  const auto s = average_ranks(y);

  SampleMeasures out{};
  out.tau = kendall_tau(x, y);
  out.rho = spearman_rho(x, y);

  double foot = 0.0, gini = 0.0;
  std::size_t medial = 0;
  for (std::size_t i = 0; i < n; ++i) {
    foot += std::abs(r[i] - s[i]);
    gini += std::abs(r[i] + s[i] - nd - 1.0) - std::abs(r[i] - s[i]);
    medial += (r[i] / (nd + 1.0) <= 0.5) && (s[i] / (nd + 1.0) <= 0.5);
  }
  out.footrule = 1.0 - 3.0 * foot / (nd * nd - 1.0);
  out.gamma = gini / std::floor(nd * nd / 2.0);
  out.beta = 4.0 * static_cast<double>(medial) / nd - 1.0;

  // sigma: 12 / m^2 sum |C_n(g) - g1 g2| over the midpoint grid g = (k + 1/2) / m.
  constexpr int kGrid = 100;
  std::vector<double> counts((kGrid + 1) * (kGrid + 1), 0.0);
  const auto cell = [&](double u) {
    // Smallest grid index whose midpoint is >= u.
    const int k = static_cast<int>(std::ceil(u * kGrid - 0.5));
    return std::clamp(k, 0, kGrid);
  };
  for (std::size_t i = 0; i < n; ++i) {
    counts[cell(r[i] / (nd + 1.0)) * (kGrid + 1) + cell(s[i] / (nd + 1.0))] += 1.0;
  }
  for (int a = 0; a <= kGrid; ++a) {
    for (int b = 0; b <= kGrid; ++b) {
      double v = counts[a * (kGrid + 1) + b];
      if (a > 0) v += counts[(a - 1) * (kGrid + 1) + b];
      if (b > 0) v += counts[a * (kGrid + 1) + b - 1];
      if (a > 0 && b > 0) v -= counts[(a - 1) * (kGrid + 1) + b - 1];
      counts[a * (kGrid + 1) + b] = v;
    }
  }
  double sigma = 0.0;
  for (int a = 0; a < kGrid; ++a) {
    const double g1 = (a + 0.5) / kGrid;
    for (int b = 0; b < kGrid; ++b) {
      const double g2 = (b + 0.5) / kGrid;
      sigma += std::abs(counts[a * (kGrid + 1) + b] / nd - g1 * g2);
    }
  }
  out.sigma = 12.0 * sigma / (kGrid * kGrid);
  return out;
}

}  // namespace

void QuadSpec::validate() const {
  if (nodes < 32) raise(ErrorCode::InvalidParameter, "quadrature needs at least 32 nodes");
}

std::vector<double> sign_change_lines(const CopulaModel& m, Margin axis) {
  std::vector<double> out;
  if (m.family() != Family::NormalMode || m.theta() == 0.0) return out;
  const int k = m.kappa()[axis == Margin::U1 ? 0 : 1];
  for (int j = 1; j < k; ++j) out.push_back(static_cast<double>(j) / k);
  return out;
}

MeasureSet measures_numeric(const CopulaModel& m, const QuadSpec& q) {
  q.validate();
  require_bivariate(m);
  require_density(m);
  const bool cluster = corner_sensitive(m);
  const auto r1 = axis_rule(q, sign_change_lines(m, Margin::U1), cluster);
  const auto r2 = axis_rule(q, sign_change_lines(m, Margin::U2), cluster);

  double rho = 0.0, sigma = 0.0, tau = 0.0;
  for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
    const double u1 = r1.nodes[i];
    double row_rho = 0.0, row_sigma = 0.0, row_tau = 0.0;
    for (std::size_t j = 0; j < r2.nodes.size(); ++j) {
      const double u2 = r2.nodes[j];
      const double w = r2.weights[j];
      const double diff = cdf(m, u1, u2) - u1 * u2;
      row_rho += w * diff;
      row_sigma += w * std::abs(diff);
      row_tau += w * conditional_cdf(m, Margin::U2, u1, u2) *
                 conditional_cdf(m, Margin::U1, u1, u2);
    }
    rho += r1.weights[i] * row_rho;
    sigma += r1.weights[i] * row_sigma;
    tau += r1.weights[i] * row_tau;
  }

  std::vector<double> diag_breaks = sign_change_lines(m, Margin::U1);
  const auto more = sign_change_lines(m, Margin::U2);
  diag_breaks.insert(diag_breaks.end(), more.begin(), more.end());
  const auto rd = axis_rule(q, diag_breaks, cluster);
  double anti = 0.0, diag_gap = 0.0, diag = 0.0;
  for (std::size_t k = 0; k < rd.nodes.size(); ++k) {
    const double u = rd.nodes[k];
    const double cuu = cdf(m, u, u);
    anti += rd.weights[k] * cdf(m, u, 1.0 - u);
    diag_gap += rd.weights[k] * (u - cuu);
    diag += rd.weights[k] * cuu;
  }

  MeasureSet out;
  out.rho = 12.0 * rho;
  out.sigma = 12.0 * sigma;
  out.tau = 1.0 - 4.0 * tau;
  out.gamma = 4.0 * (anti - diag_gap);
  out.footrule = 6.0 * diag - 2.0;
  out.beta = 4.0 * cdf(m, 0.5, 0.5) - 1.0;
  out.provenance = MeasureProvenance::Quadrature;
  return out;
}

double concordance_functional(const CopulaModel& a, const CopulaModel& b,
                              const QuadSpec& q) {
  q.validate();
  require_bivariate(a);
  require_bivariate(b);
  require_density(b);
  auto b1 = sign_change_lines(a, Margin::U1);
  auto b2 = sign_change_lines(a, Margin::U2);
  const auto extra1 = sign_change_lines(b, Margin::U1);
  const auto extra2 = sign_change_lines(b, Margin::U2);
  b1.insert(b1.end(), extra1.begin(), extra1.end());
  b2.insert(b2.end(), extra2.begin(), extra2.end());
  // Clustering is only safe when neither model contributes breakpoints.
  const bool cluster = b1.empty() && b2.empty() && (corner_sensitive(a) || corner_sensitive(b));
  const auto r1 = axis_rule(q, b1, cluster);
  const auto r2 = axis_rule(q, b2, cluster);
  double total = 0.0;
  for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < r2.nodes.size(); ++j) {
      const double u1 = r1.nodes[i], u2 = r2.nodes[j];
      row += r2.weights[j] * cdf(a, u1, u2) * density(b, u1, u2);
    }
    total += r1.weights[i] * row;
  }
  return 4.0 * total - 1.0;
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  require_pairs(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    xs[k] = x[order[k]];
    ys[k] = y[order[k]];
  }
  const std::uint64_t n1 = tied_pairs(xs);
  // Pairs tied in both coordinates: runs of equal (x, y).
  std::uint64_t n3 = 0;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && xs[end] == xs[start] && ys[end] == ys[start]) ++end;
    const std::uint64_t t = end - start;
    n3 += t * (t - 1) / 2;
    start = end;
  }
  std::vector<double> buf(n);
  const std::uint64_t swaps = count_swaps(ys, buf, 0, n);
  const std::uint64_t n2 = tied_pairs(ys);
  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double denom = std::sqrt((n0 - static_cast<double>(n1)) * (n0 - static_cast<double>(n2)));
  if (denom == 0.0) return 0.0;
  const double numer = n0 - static_cast<double>(n1) - static_cast<double>(n2) +
                       static_cast<double>(n3) - 2.0 * static_cast<double>(swaps);
  return numer / denom;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  require_pairs(x, y);
  const auto r = average_ranks(x);
  const auto s = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    sxy += (r[i] - mean) * (s[i] - mean);
    sxx += (r[i] - mean) * (r[i] - mean);
    syy += (s[i] - mean) * (s[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

MonteCarloMeasures measures_mc(const CopulaModel& m, std::size_t n, std::uint64_t seed) {
  require_bivariate(m);
  constexpr std::size_t kBatches = 20;
  if (n < 2 * kBatches) {
    raise(ErrorCode::PreconditionViolated, "Monte Carlo measures need n >= 40");
  }
  const RowMatrix draws = sample(m, n, seed);
  const auto x = draws.column(0);
  const auto y = draws.column(1);

  MonteCarloMeasures out;
  out.n = n;
  const auto full = sample_measures(x, y);
  out.estimate = {full.sigma, full.rho, full.tau, full.beta, full.gamma,
                  full.footrule, MeasureProvenance::MonteCarlo};

  // Batch means: the spread of estimates over 20 disjoint batches, scaled to
  // the full sample size.
  const std::size_t batch = n / kBatches;
  std::vector<SampleMeasures> parts;
  for (std::size_t b = 0; b < kBatches; ++b) {
    const std::span<const double> bx(x.data() + b * batch, batch);
    const std::span<const double> by(y.data() + b * batch, batch);
    parts.push_back(sample_measures(bx, by));
  }
  const auto se = [&](double SampleMeasures::*field) {
    double mean = 0.0;
    for (const auto& p : parts) mean += p.*field;
    mean /= kBatches;
    double ss = 0.0;
    for (const auto& p : parts) ss += (p.*field - mean) * (p.*field - mean);
    return std::sqrt(ss / (kBatches - 1)) / std::sqrt(static_cast<double>(kBatches));
  };
  out.standard_error = {se(&SampleMeasures::sigma), se(&SampleMeasures::rho),
                        se(&SampleMeasures::tau),   se(&SampleMeasures::beta),
                        se(&SampleMeasures::gamma), se(&SampleMeasures::footrule),
                        MeasureProvenance::MonteCarlo};
  return out;
}

TailProfile tail_dependence_profile(const CopulaModel& m,
                                    std::span<const double> u_values) {
  require_bivariate(m);
  TailProfile out;
  for (double u : u_values) {
    if (!(u > 0.0 && u < 0.5)) {
      raise(ErrorCode::DomainError, "tail profile points must lie in (0, 1/2)");
    }
    const double v = 1.0 - u;
    out.points.push_back({u, cdf(m, u, u) / u, (1.0 - 2.0 * v + cdf(m, v, v)) / u});
  }
  std::vector<TailPoint> sorted = out.points;
  std::sort(sorted.begin(), sorted.end(),
            [](const TailPoint& a, const TailPoint& b) { return a.u > b.u; });
  constexpr double kTol = 1e-12;
  out.lower_decreasing = out.upper_decreasing = true;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    out.lower_decreasing &= sorted[k].lower <= sorted[k - 1].lower + kTol;
    out.upper_decreasing &= sorted[k].upper <= sorted[k - 1].upper + kTol;
  }
  return out;
}

std::string_view to_string(QuadrantVerdict v) noexcept {
  switch (v) {
    case QuadrantVerdict::PQD: return "PQD";
    case QuadrantVerdict::NQD: return "NQD";
    case QuadrantVerdict::Mixed: return "mixed";
    case QuadrantVerdict::Independent: return "independent";
  }
  return "unknown";
}

QuadrantMap quadrant_dependence_map(const CopulaModel& m, int grid_n) {
  require_bivariate(m);
  if (grid_n < 1) raise(ErrorCode::PreconditionViolated, "grid_n must be >= 1");
  constexpr double kTol = 1e-12;
  QuadrantMap out;
  out.grid_n = grid_n;
  out.signs.resize(static_cast<std::size_t>(grid_n) * grid_n);
  bool any_pos = false, any_neg = false;
  for (int i = 0; i < grid_n; ++i) {
    const double u1 = static_cast<double>(i + 1) / (grid_n + 1);
    for (int j = 0; j < grid_n; ++j) {
      const double u2 = static_cast<double>(j + 1) / (grid_n + 1);
      const double diff = cdf(m, u1, u2) - u1 * u2;
      const int s = diff > kTol ? 1 : (diff < -kTol ? -1 : 0);
      out.signs[i * grid_n + j] = s;
      any_pos |= s > 0;
      any_neg |= s < 0;
    }
  }
  if (any_pos && any_neg) {
    out.verdict = QuadrantVerdict::Mixed;
  } else if (any_pos) {
    out.verdict = QuadrantVerdict::PQD;
  } else if (any_neg) {
    out.verdict = QuadrantVerdict::NQD;
  } else {
    out.verdict = QuadrantVerdict::Independent;
  }
  return out;
}

}  // namespace nmcopula
