#include "nmcopula/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmcopula/error.hpp"

namespace nmcopula {

RawSample::RawSample(RowMatrix values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
  if (values_.rows() < 2) {
    raise(ErrorCode::PreconditionViolated, "sample needs at least 2 rows");
  }
  if (values_.cols() < 1) {
    raise(ErrorCode::PreconditionViolated, "sample needs at least 1 column");
  }
  for (std::size_t i = 0; i < values_.rows(); ++i) {
    for (std::size_t j = 0; j < values_.cols(); ++j) {
      if (!std::isfinite(values_(i, j))) {
        raise(ErrorCode::NonFiniteInput,
              "non-finite value at row " + std::to_string(i + 1) +
                  ", column " + std::to_string(j + 1));
      }
    }
  }
  if (names_.empty()) {
    for (std::size_t j = 0; j < values_.cols(); ++j) {
      names_.push_back("x" + std::to_string(j + 1));
    }
  } else if (names_.size() != values_.cols()) {
    raise(ErrorCode::PreconditionViolated,
          "column name count does not match the data");
  }
}

PseudoSample::PseudoSample(RowMatrix u, std::vector<std::size_t> tie_counts)
    : u_(std::move(u)), tie_counts_(std::move(tie_counts)) {
  if (u_.empty()) {
    raise(ErrorCode::PreconditionViolated, "pseudo-sample is empty");
  }
  for (double x : u_.data()) {
    if (!(x > 0.0 && x < 1.0)) {
      raise(ErrorCode::DomainError,
            "pseudo-observation outside (0, 1): " + std::to_string(x));
    }
  }
  if (tie_counts_.empty()) tie_counts_.assign(u_.cols(), 0);
  if (tie_counts_.size() != u_.cols()) {
    raise(ErrorCode::DimensionMismatch, "tie_counts size must equal D");
  }
}

PseudoSample PseudoSample::without_row(std::size_t i) const {
  if (i >= size()) raise(ErrorCode::IndexOutOfRange, "row index out of range");
  if (size() < 2) {
    raise(ErrorCode::PreconditionViolated, "cannot drop the only row");
  }
  std::vector<double> data;
  data.reserve((size() - 1) * dimension());
  for (std::size_t r = 0; r < size(); ++r) {
    if (r == i) continue;
    const auto row = u_.row(r);
    data.insert(data.end(), row.begin(), row.end());
  }
  return PseudoSample(RowMatrix(size() - 1, dimension(), std::move(data)),
                      tie_counts_);
}

PseudoSample pseudo_observations(const RawSample& raw) {
  const std::size_t n = raw.rows();
  const std::size_t dim = raw.cols();
  RowMatrix u(n, dim);
  std::vector<std::size_t> ties(dim, 0);
  std::vector<std::size_t> order(n);
  for (std::size_t d = 0; d < dim; ++d) {
    const auto col = raw.values().column(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = start + 1;
      while (end < n && col[order[end]] == col[order[start]]) ++end;
      // #{x_j < x_i} = start, #{x_j <= x_i} = end.
      const double avg_rank = 0.5 * (static_cast<double>(start + end) + 1.0);
      for (std::size_t k = start; k < end; ++k) {
        u(order[k], d) = avg_rank / static_cast<double>(n + 1);
      }
      if (end - start > 1) ties[d] += end - start;
      start = end;
    }
  }
  return PseudoSample(std::move(u), std::move(ties));
}

double empirical_copula(const PseudoSample& ps, std::span<const double> p) {
  if (p.size() != ps.dimension()) {
    raise(ErrorCode::DimensionMismatch, "point dimension does not match sample");
  }
  std::size_t count = 0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    bool inside = true;
    for (std::size_t d = 0; d < p.size() && inside; ++d) {
      inside = ps(j, d) <= p[d];
    }
    count += inside;
  }
  return static_cast<double>(count) / static_cast<double>(ps.size());
}

std::vector<double> empirical_copula_at_sample(const PseudoSample& ps) {
  const std::size_t n = ps.size();
  std::vector<double> out(n);
  if (ps.dimension() != 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = empirical_copula(ps, ps.u().row(i));
    return out;
  }
  // Sweep in u1 order; a Fenwick tree over u2 ranks counts the points already
  // swept. Points with equal u1 are inserted before any of them is queried.
  std::vector<double> u2 = ps.u().column(1);
  std::vector<double> levels = u2;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<std::size_t> tree(levels.size() + 1, 0);
  const auto level_of = [&](double v) {
    return static_cast<std::size_t>(
        std::lower_bound(levels.begin(), levels.end(), v) - levels.begin()) + 1;
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ps(a, 0) < ps(b, 0); });
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && ps(order[end], 0) == ps(order[start], 0)) ++end;
    for (std::size_t k = start; k < end; ++k) {
      for (std::size_t x = level_of(u2[order[k]]); x < tree.size(); x += x & (~x + 1)) {
        ++tree[x];
      }
    }
    for (std::size_t k = start; k < end; ++k) {
      std::size_t count = 0;
      for (std::size_t x = level_of(u2[order[k]]); x > 0; x -= x & (~x + 1)) {
        count += tree[x];
      }
      out[order[k]] = static_cast<double>(count) / static_cast<double>(n);
    }
    start = end;
  }
  return out;
}

std::vector<double> loo_pseudo(const PseudoSample& ps, std::size_t i) {
  const std::size_t n = ps.size();
  if (i >= n) raise(ErrorCode::IndexOutOfRange, "row index out of range");
  if (n < 2) raise(ErrorCode::PreconditionViolated, "need at least 2 rows");
  std::vector<double> out(ps.dimension());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t d = 0; d < ps.dimension(); ++d) {
    const double v = ps(i, d);
    std::size_t count = 0;
    double min_other = 2.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      min_other = std::min(min_other, ps(j, d));
      count += ps(j, d) <= v;
    }
    out[d] = v >= min_other ? static_cast<double>(count) * inv_n : inv_n;
  }
  return out;
}

RowMatrix loo_pseudo_all(const PseudoSample& ps) {
  const std::size_t n = ps.size();
  if (n < 2) raise(ErrorCode::PreconditionViolated, "need at least 2 rows");
  const double inv_n = 1.0 / static_cast<double>(n);
  RowMatrix out(n, ps.dimension());
  for (std::size_t d = 0; d < ps.dimension(); ++d) {
    std::vector<double> sorted = ps.u().column(d);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
      const double v = ps(i, d);
      // Every point <= v, minus point i itself.
      const auto le = static_cast<std::size_t>(
          std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
      const std::size_t count = le - 1;
      // The minimum over j != i is sorted[1] when i holds the unique minimum.
      const double min_other = (v == sorted[0] && sorted[1] != v) ? sorted[1] : sorted[0];
      out(i, d) = v >= min_other ? static_cast<double>(count) * inv_n : inv_n;
    }
  }
  return out;
}

double empirical_quantile(std::span<const double> values, double q) {
  if (values.empty()) raise(ErrorCode::PreconditionViolated, "no values");
  if (!(q >= 0.0 && q <= 1.0)) {
    raise(ErrorCode::DomainError, "quantile level outside [0, 1]");
  }
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = static_cast<double>(v.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

RawSample quantile_trim(const RawSample& raw, double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    raise(ErrorCode::PreconditionViolated, "trim bounds need 0 <= lo < hi <= 1");
  }
  const std::size_t dim = raw.cols();
  std::vector<double> qlo(dim), qhi(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    const auto col = raw.values().column(d);
    qlo[d] = empirical_quantile(col, lo);
    qhi[d] = empirical_quantile(col, hi);
  }
  std::vector<double> kept;
  std::size_t rows = 0;
  for (std::size_t i = 0; i < raw.rows(); ++i) {
    const auto row = raw.values().row(i);
    bool keep = true;
    for (std::size_t d = 0; d < dim && keep; ++d) {
      keep = row[d] >= qlo[d] && row[d] <= qhi[d];
    }
    if (!keep) continue;
    kept.insert(kept.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows < 2) {
    raise(ErrorCode::EmptyAfterTrim,
          "trimming left " + std::to_string(rows) + " rows");
  }
  return RawSample(RowMatrix(rows, dim, std::move(kept)), raw.names());
}

}  // namespace nmcopula
