#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nmcopula/association.hpp"
#include "nmcopula/copula_core.hpp"
#include "nmcopula/error.hpp"
#include "nmcopula/normal_mode.hpp"
#include "support/generators.hpp"

using namespace nmcopula;

namespace {

constexpr double kPi = std::numbers::pi;
const double kPi4 = std::pow(kPi, 4);

double brute_tau_b(std::span<const double> x, std::span<const double> y) {
  double conc = 0, disc = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double s = (x[i] - x[j]) * (y[i] - y[j]);
      if (s > 0) conc += 1;
      if (s < 0) disc += 1;
      if (x[i] == x[j] && y[i] != y[j]) tx += 1;
      if (y[i] == y[j] && x[i] != x[j]) ty += 1;
    }
  }
  return (conc - disc) / std::sqrt((conc + disc + tx) * (conc + disc + ty));
}

}  // namespace

TEST_SUITE("association") {

TEST_CASE("product copula") {
  const auto m = measures_numeric(CopulaModel::product());
  CHECK(std::abs(m.rho) <= 1e-10);
  CHECK(std::abs(m.sigma) <= 1e-10);
  CHECK(std::abs(m.tau) <= 1e-10);
  CHECK(std::abs(m.beta) <= 1e-10);
  CHECK(std::abs(m.gamma) <= 1e-10);
  CHECK(std::abs(m.footrule) <= 1e-10);
  CHECK(m.provenance == MeasureProvenance::Quadrature);
  CHECK_THROWS_AS(measures_numeric(CopulaModel::frechet_upper()), CopulaError);
  CHECK_THROWS_AS(QuadSpec{16}.validate(), CopulaError);
}

TEST_CASE("normal mode quadrature") {
  auto m = measures_numeric(CopulaModel::normal_mode(1.0, {1, 1}));
  CHECK(std::abs(m.rho - 48 / kPi4) <= 1e-6);
  CHECK(std::abs(m.sigma - 48 / kPi4) <= 1e-6);
  CHECK(std::abs(m.tau - 32 / kPi4) <= 1e-6);
  CHECK(std::abs(m.beta - 4 / (kPi * kPi)) <= 1e-12);
  // From the integral definitions (not zero, see the README).
  CHECK(std::abs(m.gamma - 4 / (kPi * kPi)) <= 1e-8);
  CHECK(std::abs(m.footrule - 3 / (kPi * kPi)) <= 1e-8);

  m = measures_numeric(CopulaModel::normal_mode(1.0, {2, 1}));
  CHECK(std::abs(m.rho) <= 1e-8);
  CHECK(std::abs(m.tau) <= 1e-8);
  CHECK(std::abs(m.sigma - 24 / kPi4) <= 1e-6);

  const double s11 = measures_numeric(CopulaModel::normal_mode(0.7, {1, 1})).sigma;
  const double s33 = measures_numeric(CopulaModel::normal_mode(0.7, {3, 3})).sigma;
  CHECK(s33 < s11);
}

TEST_CASE("closed forms against quadrature at random parameters") {
  CounterRng rng(3);
  for (int rep = 0; rep < 12; ++rep) {
    const NormalModeParams p{nmtest::uniform_in(rng, -1, 1), nmtest::kappa_pair(rng, 5)};
    const double gap = max_abs_gap(nm_measures(p), measures_numeric(CopulaModel::normal_mode(p)));
    INFO("theta ", p.theta, " kappa ", p.kappa[0], ",", p.kappa[1]);
    CHECK(gap <= 1e-6);
  }
}

TEST_CASE("classical measures against known identities") {
  // Gaussian: rho_S = 6/pi asin(r/2), tau = 2/pi asin(r).
  const double r = 0.6;
  auto m = measures_numeric(CopulaModel::gaussian(r));
  CHECK(m.rho == doctest::Approx(6 / kPi * std::asin(r / 2)).epsilon(1e-7));
  CHECK(m.tau == doctest::Approx(2 / kPi * std::asin(r)).epsilon(1e-7));
  // Clayton tau = theta / (theta + 2); FGM rho = theta / 3, tau = 2 theta / 9.
  m = measures_numeric(CopulaModel::clayton(2.0));
  CHECK(m.tau == doctest::Approx(0.5).epsilon(1e-7));
  m = measures_numeric(CopulaModel::fgm(-0.9));
  CHECK(m.rho == doctest::Approx(-0.3).epsilon(1e-10));
  CHECK(m.tau == doctest::Approx(-0.2).epsilon(1e-10));
}

TEST_CASE("quadrature converges") {
  const std::vector<CopulaModel> models{
      CopulaModel::normal_mode(0.9, {3, 2}), CopulaModel::fgm(0.5),
      CopulaModel::frank(4.0), CopulaModel::gaussian(0.5), CopulaModel::amh(0.7)};
  for (const auto& m : models) {
    INFO(m.describe());
    CHECK(max_abs_gap(measures_numeric(m, {256}), measures_numeric(m, {512})) <= 1e-8);
  }
}

TEST_CASE("concordance functional") {
  const auto nm = CopulaModel::normal_mode(0.8, {1, 1});
  const auto fgm = CopulaModel::fgm(0.6);
  CHECK(concordance_functional(nm, nm) == doctest::Approx(nm_measures({0.8, {1, 1}}).tau).epsilon(1e-8));
  // Omega(Pi, C) = rho_S(C) / 3.
  CHECK(concordance_functional(CopulaModel::product(), fgm) == doctest::Approx(0.2 / 3).epsilon(1e-10));
  CHECK(concordance_functional(nm, fgm) == doctest::Approx(concordance_functional(fgm, nm)).epsilon(1e-8));
}

TEST_CASE("sample rank estimators") {
  CounterRng rng(5);
  for (int levels : {0, 3, 12}) {
    std::vector<double> x(150), y(150);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = levels ? nmtest::int_in(rng, 0, levels) : rng.uniform();
      y[i] = levels ? nmtest::int_in(rng, 0, levels) + (x[i] > levels / 2) : x[i] + rng.uniform();
    }
    CHECK(kendall_tau(x, y) == doctest::Approx(brute_tau_b(x, y)).epsilon(1e-12));
  }
  const std::vector<double> a{1, 2, 3, 4, 5}, b{5, 6, 7, 8, 7};
  CHECK(spearman_rho(a, a) == doctest::Approx(1.0));
  // Average ranks of b: 1 2 3.5 5 3.5.
  const double ra[5] = {1, 2, 3, 4, 5}, rb[5] = {1, 2, 3.5, 5, 3.5};
  double sab = 0, saa = 0, sbb = 0;
  for (int i = 0; i < 5; ++i) {
    sab += (ra[i] - 3) * (rb[i] - 3);
    saa += (ra[i] - 3) * (ra[i] - 3);
    sbb += (rb[i] - 3) * (rb[i] - 3);
  }
  CHECK(spearman_rho(a, b) == doctest::Approx(sab / std::sqrt(saa * sbb)).epsilon(1e-14));
}

TEST_CASE("Monte Carlo measures") {
  auto mc = measures_mc(CopulaModel::product(), 100000, 1);
  CHECK(std::abs(mc.estimate.tau) < 0.01);
  CHECK(mc.estimate.provenance == MeasureProvenance::MonteCarlo);

  mc = measures_mc(CopulaModel::normal_mode(1.0, {1, 1}), 100000, 2);
  CHECK(std::abs(mc.estimate.tau - 32 / kPi4) < 0.01);

  const std::vector<CopulaModel> models{
      CopulaModel::normal_mode(1.0, {1, 1}), CopulaModel::normal_mode(-0.7, {3, 1}),
      CopulaModel::clayton(1.5), CopulaModel::gaussian(-0.4)};
  for (const auto& m : models) {
    const auto est = measures_mc(m, 40000, 3);
    const auto num = measures_numeric(m);
    INFO(m.describe());
    CHECK(std::abs(est.estimate.rho - num.rho) <= 3 * est.standard_error.rho);
    CHECK(std::abs(est.estimate.tau - num.tau) <= 3 * est.standard_error.tau);
  }
  CHECK_THROWS_AS(measures_mc(CopulaModel::product(), 10, 1), CopulaError);
}

TEST_CASE("tail profiles") {
  const std::vector<double> us{1e-2, 1e-3, 1e-4};
  auto t = tail_dependence_profile(CopulaModel::frechet_upper(), us);
  for (const auto& p : t.points) {
    CHECK(p.lower == doctest::Approx(1.0));
    CHECK(p.upper == doctest::Approx(1.0));
  }
  t = tail_dependence_profile(CopulaModel::product(), us);
  for (const auto& p : t.points) CHECK(p.lower == doctest::Approx(p.u).epsilon(1e-12));
  CHECK(t.lower_decreasing);

  t = tail_dependence_profile(CopulaModel::normal_mode(1.0, {2, 1}), us);
  CHECK(t.lower_decreasing);
  CHECK(t.upper_decreasing);
  CHECK(t.points.back().lower < 0.05);
  CHECK(t.points.back().upper < 0.05);

  // Clayton keeps lower tail dependence 2^(-1/theta).
  t = tail_dependence_profile(CopulaModel::clayton(2.0), us);
  CHECK(t.points.back().lower == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-3));
  const double bad[1] = {0.6};
  CHECK_THROWS_AS(tail_dependence_profile(CopulaModel::product(), bad), CopulaError);
}

TEST_CASE("quadrant dependence") {
  CHECK(quadrant_dependence_map(CopulaModel::normal_mode(0.5, {1, 1}), 30).verdict == QuadrantVerdict::PQD);
  CHECK(quadrant_dependence_map(CopulaModel::normal_mode(-0.5, {1, 1}), 30).verdict == QuadrantVerdict::NQD);
  CHECK(quadrant_dependence_map(CopulaModel::normal_mode(0.5, {1, 2}), 30).verdict == QuadrantVerdict::Mixed);
  const auto ind = quadrant_dependence_map(CopulaModel::product(), 30);
  CHECK(ind.verdict == QuadrantVerdict::Independent);
  CHECK(ind.sign_at(3, 4) == 0);
}

TEST_CASE("stochastic increase for the lowest mode") {
  // theta > 0, kappa = (1, 1): P(U2 <= v | U1 = u) is nonincreasing in u.
  const auto m = CopulaModel::normal_mode(0.8, {1, 1});
  for (int j = 1; j < 20; ++j) {
    double prev = 2.0;
    for (int i = 1; i < 100; ++i) {
      const double v = conditional_cdf(m, Margin::U2, i / 100.0, j / 20.0);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("sign change lines") {
  const auto lines = sign_change_lines(CopulaModel::normal_mode(0.5, {3, 2}), Margin::U1);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == doctest::Approx(1.0 / 3));
  CHECK(sign_change_lines(CopulaModel::fgm(0.5), Margin::U1).empty());
}

}  // TEST_SUITE
