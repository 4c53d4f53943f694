#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nmcopula/association.hpp"
#include "nmcopula/copula_core.hpp"
#include "nmcopula/error.hpp"
#include "support/generators.hpp"

using namespace nmcopula;

namespace {

double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max({d, (i + 1) / n - x[i], x[i] - i / n});
  }
  return d;
}

template <class Code>
void check_code(Code&& fn, ErrorCode expected) {
  try {
    fn();
    FAIL("expected an error");
  } catch (const CopulaError& e) {
    CHECK(e.code() == expected);
  }
}

}  // namespace

TEST_SUITE("copula_core") {

TEST_CASE("reference families") {
  CHECK(cdf(CopulaModel::product(), 0.3, 0.4) == doctest::Approx(0.12).epsilon(1e-15));
  CHECK(cdf(CopulaModel::frechet_lower(), 0.3, 0.4) == 0.0);
  CHECK(cdf(CopulaModel::frechet_upper(), 0.3, 0.4) == 0.3);
  CHECK(cdf(CopulaModel::frechet_lower(), 0.8, 0.7) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(density(CopulaModel::product(), 0.1, 0.9) == 1.0);
  CHECK(density(CopulaModel::gaussian(0.0), 0.1, 0.9) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(density(CopulaModel::fgm(1.0), 0.5, 0.5) == 1.0);

  const double u3[3] = {0.2, 0.5, 0.9};
  CHECK(cdf(CopulaModel::product(3), u3) == doctest::Approx(0.09).epsilon(1e-15));
  CHECK(cdf(CopulaModel::frechet_upper(3), u3) == 0.2);
}

TEST_CASE("construction and errors") {
  check_code([] { CopulaModel::normal_mode(1.5, {1, 1}); }, ErrorCode::InvalidParameter);
  check_code([] { CopulaModel::clayton(0.0); }, ErrorCode::InvalidParameter);
  check_code([] { CopulaModel::make(Family::AMH, 0.5, {}, 3); }, ErrorCode::DimensionMismatch);
  check_code([] { density(CopulaModel::frechet_upper(), 0.3, 0.4); }, ErrorCode::NoDensity);
  check_code([] { density(CopulaModel::gaussian(1.0), 0.3, 0.4); }, ErrorCode::NoDensity);
  check_code([] {
    const double u[3] = {0.1, 0.2, 0.3};
    cdf(CopulaModel::fgm(0.2), u);
  }, ErrorCode::DimensionMismatch);
  check_code([] { sample(CopulaModel::frechet_lower(), 10, 1); }, ErrorCode::NoDensity);

  CHECK(CopulaModel::normal_mode(1.0, {2, 1}).describe() == "normal_mode(theta=1, kappa=(2,1))");
  CHECK(CopulaModel::make(Family::NormalMode, 0.5).kappa().size() == 2);
  CHECK(CopulaModel::make(Family::Frank, 0.0).family() == Family::Product);
}

TEST_CASE("boundary path") {
  CounterRng rng(3);
  for (Family f : kAllFamilies) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto m = nmtest::random_model(f, rng);
      for (int k = 0; k <= 100; ++k) {
        const double t = k / 100.0;
        CHECK(cdf(m, 0.0, t) == 0.0);
        CHECK(cdf(m, t, 0.0) == 0.0);
        CHECK(std::abs(cdf(m, 1.0, t) - t) <= 1e-12);
        CHECK(std::abs(cdf(m, t, 1.0) - t) <= 1e-12);
      }
    }
  }
}

TEST_CASE("conditional cdf") {
  CHECK(conditional_cdf(CopulaModel::product(), Margin::U2, 0.3, 0.7) == 0.7);
  CHECK(conditional_cdf(CopulaModel::gaussian(0.0), Margin::U2, 0.3, 0.7) ==
        doctest::Approx(0.7).epsilon(1e-14));
  CHECK(conditional_cdf(CopulaModel::fgm(1.0), Margin::U2, 1e-14, 0.5) ==
        doctest::Approx(0.75).epsilon(1e-12));

  CounterRng rng(5);
  for (Family f : kFittedFamilies) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto m = nmtest::random_model(f, rng);
      const double given = rng.uniform();
      double prev = 0.0;
      CHECK(conditional_cdf(m, Margin::U2, given, 0.0) == 0.0);
      CHECK(conditional_cdf(m, Margin::U2, given, 1.0) == 1.0);
      for (int k = 1; k < 1000; ++k) {
        const double v = conditional_cdf(m, Margin::U2, given, k / 1000.0);
        CHECK(v >= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("conditional quantile") {
  CHECK(conditional_quantile(CopulaModel::product(), Margin::U2, 0.8, 0.42) == 0.42);
  CHECK(conditional_quantile(CopulaModel::normal_mode(1.0, {1, 1}), Margin::U2, 0.5, 0.3) ==
        doctest::Approx(0.3).epsilon(1e-12));

  CounterRng rng(7);
  for (int rep = 0; rep < 1000; ++rep) {
    const Family f = kFittedFamilies[rep % 6];
    const auto m = nmtest::random_model(f, rng);
    const double given = nmtest::uniform_in(rng, 0.01, 0.99);
    const double x = nmtest::uniform_in(rng, 0.01, 0.99);
    const double p = conditional_cdf(m, Margin::U2, given, x);
    if (p <= 1e-9 || p >= 1 - 1e-9) continue;  // flat tail, x not identifiable
    const double back = conditional_quantile(m, Margin::U2, given, p);
    // Round-trip in probability is the contract; in x it holds wherever the
    // conditional density is not tiny.
    CHECK(std::abs(conditional_cdf(m, Margin::U2, given, back) - p) <= 1e-12);
    const double slope = density(m, given, x);
    if (slope > 1e-2) {
      INFO(m.describe(), " given=", given, " x=", x);
      CHECK(std::abs(back - x) <= 1e-10);
    }
  }
}

TEST_CASE("sampling") {
  const auto prod = sample(CopulaModel::product(), 100000, 11);
  CHECK(ks_uniform(prod.column(0)) < 0.006);
  CHECK(ks_uniform(prod.column(1)) < 0.006);

  const auto nm = CopulaModel::normal_mode(0.7, {2, 3});
  CHECK(sample(nm, 500, 9) == sample(nm, 500, 9));
  CHECK_FALSE(sample(nm, 500, 9) == sample(nm, 500, 10));
  // Row i depends only on (seed, i).
  const auto shorter = sample(nm, 100, 9);
  const auto longer = sample(nm, 500, 9);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(shorter(i, 0) == longer(i, 0));
    CHECK(shorter(i, 1) == longer(i, 1));
  }

  const auto draws = sample(CopulaModel::normal_mode(1.0, {1, 1}), 100000, 12);
  const double pi4 = std::pow(std::numbers::pi, 4);
  CHECK(std::abs(spearman_rho(draws.column(0), draws.column(1)) - 48 / pi4) < 0.01);

  for (Family f : kFittedFamilies) {
    CounterRng rng(static_cast<std::uint64_t>(f));
    const auto m = nmtest::random_model(f, rng);
    const auto s = sample(m, 20000, 3);
    INFO(m.describe());
    CHECK(ks_uniform(s.column(0)) < 0.02);
    CHECK(ks_uniform(s.column(1)) < 0.02);
  }

  // Trivariate normal mode: margins stay uniform.
  const auto tri = sample(CopulaModel::normal_mode(1.0, {1, 2, 3}), 50000, 4);
  REQUIRE(tri.cols() == 3);
  for (std::size_t d = 0; d < 3; ++d) CHECK(ks_uniform(tri.column(d)) < 0.01);
}

TEST_CASE("axiom checker") {
  CHECK(check_copula_axioms(CopulaModel::product(), 1000, 1).passed());
  CHECK(check_copula_axioms(CopulaModel::normal_mode(-1.0, {3, 2}), 10000, 2).passed());
  CHECK(check_copula_axioms(CopulaModel::frechet_lower(), 1000, 3).passed());

  const double lo[2] = {0.2, 0.3}, hi[2] = {0.6, 0.9};
  CHECK(copula_volume(CopulaModel::product(), lo, hi) == doctest::Approx(0.4 * 0.6).epsilon(1e-14));
  CHECK(copula_volume(CopulaModel::frechet_upper(), lo, hi) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("concordance comparison") {
  CHECK(concordance_compare(CopulaModel::frechet_lower(), CopulaModel::frechet_upper(), 20).verdict ==
        ConcordanceVerdict::ABelowB);
  CHECK(concordance_compare(CopulaModel::product(), CopulaModel::product(), 20).verdict ==
        ConcordanceVerdict::Equal);
  // theta* = 0.3 pi^2 / 4 = 0.740 fits the FGM domain; 1.01 theta* is dominant.
  const double star = 0.3 * std::numbers::pi * std::numbers::pi / 4;
  CHECK(concordance_compare(CopulaModel::normal_mode(0.3, {1, 1}), CopulaModel::fgm(1.01 * star), 30)
            .verdict == ConcordanceVerdict::ABelowB);
  CHECK(concordance_compare(CopulaModel::normal_mode(1.0, {1, 2}), CopulaModel::normal_mode(-1.0, {1, 2}), 20)
            .verdict == ConcordanceVerdict::Incomparable);
  CHECK(to_string(ConcordanceVerdict::ABelowB) == "A_below_B");

  CounterRng rng(13);
  for (Family f : kAllFamilies) {
    const auto m = nmtest::random_model(f, rng);
    CHECK(concordance_compare(m, m, 15).verdict == ConcordanceVerdict::Equal);
  }

  // Every copula lies between the bounds.
  for (Family f : kAllFamilies) {
    const auto m = nmtest::random_model(f, rng);
    const auto lower = concordance_compare(CopulaModel::frechet_lower(), m, 20).verdict;
    const auto upper = concordance_compare(m, CopulaModel::frechet_upper(), 20).verdict;
    CHECK(lower != ConcordanceVerdict::BBelowA);
    CHECK(lower != ConcordanceVerdict::Incomparable);
    CHECK(upper != ConcordanceVerdict::BBelowA);
    CHECK(upper != ConcordanceVerdict::Incomparable);
  }
}

}  // TEST_SUITE
