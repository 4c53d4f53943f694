#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "nmcopula/empirical.hpp"
#include "nmcopula/error.hpp"
#include "support/generators.hpp"

using namespace nmcopula;

namespace {

RawSample two_columns(const std::vector<double>& a, const std::vector<double>& b) {
  RowMatrix m(a.size(), 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    m(i, 0) = a[i];
    m(i, 1) = b[i];
  }
  return RawSample(std::move(m));
}

PseudoSample random_pseudo(CounterRng& rng, std::size_t n, int levels = 0) {
  RowMatrix m = levels > 0 ? nmtest::tied_data(rng, n, levels) : RowMatrix(n, 2);
  if (levels == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      m(i, 0) = rng.uniform();
      m(i, 1) = m(i, 0) * 0.5 + rng.uniform();
    }
  }
  return pseudo_observations(RawSample(std::move(m)));
}

}  // namespace

TEST_SUITE("empirical") {

TEST_CASE("raw sample validation") {
  CHECK_THROWS_AS(RawSample(RowMatrix(1, 2, 0.5)), CopulaError);
  RowMatrix bad(3, 2, 0.5);
  bad(1, 1) = NAN;
  try {
    RawSample{bad};
    FAIL("expected NonFiniteInput");
  } catch (const CopulaError& e) {
    CHECK(e.code() == ErrorCode::NonFiniteInput);
  }
  const RawSample named(RowMatrix(3, 2, 0.5));
  CHECK(named.names() == std::vector<std::string>{"x1", "x2"});
  CHECK_THROWS_AS(PseudoSample(RowMatrix(2, 2, 1.0)), CopulaError);
}

TEST_CASE("pseudo-observations") {
  auto ps = pseudo_observations(two_columns({10, 20, 30}, {10, 10, 30}));
  CHECK(ps(0, 0) == 0.25);
  CHECK(ps(1, 0) == 0.5);
  CHECK(ps(2, 0) == 0.75);
  CHECK(ps(0, 1) == 0.375);
  CHECK(ps(1, 1) == 0.375);
  CHECK(ps(2, 1) == 0.75);
  CHECK(ps.tie_counts() == std::vector<std::size_t>{0, 2});

  std::vector<double> inc(40);
  std::iota(inc.begin(), inc.end(), 0.0);
  ps = pseudo_observations(two_columns(inc, inc));
  for (std::size_t i = 0; i < inc.size(); ++i) {
    CHECK(ps(i, 0) == doctest::Approx((i + 1) / 41.0).epsilon(1e-15));
  }
}

TEST_CASE("rank invariance under increasing maps") {
  CounterRng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    RowMatrix m = rep % 2 ? nmtest::tied_data(rng, 200, 15) : RowMatrix(200, 2);
    if (rep % 2 == 0) {
      for (std::size_t i = 0; i < 200; ++i) {
        m(i, 0) = rng.uniform() * 4 - 2;
        m(i, 1) = rng.uniform();
      }
    }
    RowMatrix mapped = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      mapped(i, 0) = std::exp(m(i, 0));
      mapped(i, 1) = 3.0 * m(i, 1) - 7.0;
    }
    const auto a = pseudo_observations(RawSample(m));
    const auto b = pseudo_observations(RawSample(mapped));
    CHECK(a.u() == b.u());
    if (rep % 2 == 0) {
      for (std::size_t d = 0; d < 2; ++d) {
        const auto col = a.u().column(d);
        CHECK(std::accumulate(col.begin(), col.end(), 0.0) / col.size() ==
              doctest::Approx(0.5).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("empirical copula") {
  auto ps = pseudo_observations(two_columns({1, 2, 3, 4}, {1, 2, 3, 4}));
  const double mid[2] = {0.5, 0.5};
  CHECK(empirical_copula(ps, mid) == 0.5);
  const double top[2] = {1 - 1e-12, 1 - 1e-12};
  CHECK(empirical_copula(ps, top) == 1.0);
  const double low[2] = {0.1, 0.9};
  CHECK(empirical_copula(ps, low) == 0.0);
  const double three[3] = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(empirical_copula(ps, three), CopulaError);

  CounterRng rng(5);
  for (int levels : {0, 4, 30}) {
    ps = random_pseudo(rng, 300, levels);
    // Fast path against the direct count, ties included.
    const auto fast = empirical_copula_at_sample(ps);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      CHECK(fast[i] == empirical_copula(ps, ps.u().row(i)));
    }
    // Nondecreasing on a grid and 1 at the largest observations.
    for (int i = 1; i <= 20; ++i) {
      for (int j = 1; j <= 20; ++j) {
        const double p[2] = {i / 21.0, j / 21.0};
        const double pl[2] = {(i - 1) / 21.0, j / 21.0};
        const double pd[2] = {i / 21.0, (j - 1) / 21.0};
        CHECK(empirical_copula(ps, p) >= empirical_copula(ps, pl));
        CHECK(empirical_copula(ps, p) >= empirical_copula(ps, pd));
      }
    }
    const auto c0 = ps.u().column(0), c1 = ps.u().column(1);
    const double mx[2] = {*std::max_element(c0.begin(), c0.end()),
                          *std::max_element(c1.begin(), c1.end())};
    CHECK(empirical_copula(ps, mx) == 1.0);
  }
}

TEST_CASE("leave-one-out pseudo-observations") {
  RowMatrix u(3, 2);
  const double col[3] = {0.25, 0.5, 0.75};
  for (int i = 0; i < 3; ++i) u(i, 0) = u(i, 1) = col[i];
  const PseudoSample ps(u);
  CHECK(loo_pseudo(ps, 2)[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(loo_pseudo(ps, 0)[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(loo_pseudo(ps, 3), CopulaError);

  CounterRng rng(7);
  for (int levels : {0, 5}) {
    const auto sample = random_pseudo(rng, 150, levels);
    const auto all = loo_pseudo_all(sample);
    const double n = static_cast<double>(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const auto one = loo_pseudo(sample, i);
      CHECK(all(i, 0) == one[0]);
      CHECK(all(i, 1) == one[1]);
      if (levels == 0) {
        // (rank among the others) / N, with the minimum mapped to 1/N.
        const auto c = sample.u().column(0);
        const double below = static_cast<double>(
            std::count_if(c.begin(), c.end(), [&](double v) { return v < c[i]; }));
        CHECK(one[0] == doctest::Approx(std::max(below, 1.0) / n).epsilon(1e-15));
      }
    }
  }
  const auto argmax = random_pseudo(rng, 50);
  const auto c = argmax.u().column(1);
  const auto top = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
  CHECK(loo_pseudo(argmax, top)[1] == doctest::Approx(49.0 / 50).epsilon(1e-15));
}

TEST_CASE("trimming") {
  CounterRng rng(9);
  RowMatrix m(100, 2);
  for (std::size_t i = 0; i < 100; ++i) {
    m(i, 0) = rng.uniform();
    m(i, 1) = rng.uniform();
  }
  const RawSample raw(m);
  CHECK(quantile_trim(raw, 0.0, 1.0).values() == raw.values());
  const auto trimmed = quantile_trim(raw);
  CHECK(trimmed.rows() >= 96);
  CHECK(trimmed.rows() < 100);

  RowMatrix flat = m;
  for (std::size_t i = 0; i < 100; ++i) flat(i, 1) = 4.0;
  const auto kept = quantile_trim(RawSample(flat), 0.01, 0.99);
  CHECK(kept.rows() == 98);  // only column one trims

  const std::vector<double> v{1, 2, 3, 4, 5};
  CHECK(empirical_quantile(v, 0.0) == 1);
  CHECK(empirical_quantile(v, 0.5) == 3);
  CHECK(empirical_quantile(v, 0.1) == doctest::Approx(1.4).epsilon(1e-15));

  RowMatrix tiny(2, 2);
  tiny(0, 0) = 0; tiny(0, 1) = 1;
  tiny(1, 0) = 1; tiny(1, 1) = 0;
  try {
    quantile_trim(RawSample(tiny), 0.4, 0.6);
    FAIL("expected EmptyAfterTrim");
  } catch (const CopulaError& e) {
    CHECK(e.code() == ErrorCode::EmptyAfterTrim);
  }
}

}  // TEST_SUITE
