#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/owens_t.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nmcopula/classical.hpp"
#include "nmcopula/copula_core.hpp"
#include "nmcopula/error.hpp"
#include "support/generators.hpp"

using namespace nmcopula;

namespace {

constexpr double kPi = std::numbers::pi;

// Owen's T representation of the bivariate normal CDF.
double bvn_owen(double h, double k, double rho) {
  const boost::math::normal_distribution<double> n01;
  const double s = std::sqrt(1 - rho * rho);
  const double ah = (k - rho * h) / (h * s);
  const double ak = (h - rho * k) / (k * s);
  const double beta = (h * k > 0 || (h * k == 0 && h + k >= 0)) ? 0.0 : 0.5;
  return 0.5 * boost::math::cdf(n01, h) + 0.5 * boost::math::cdf(n01, k) -
         boost::math::owens_t(h, ah) - boost::math::owens_t(k, ak) - beta;
}

// Textbook closed forms, evaluated directly.
double amh_closed(double t, double a, double b) {
  return a * b / (1 - t * (1 - a) * (1 - b));
}
double clayton_closed(double t, double a, double b) {
  return std::pow(std::pow(a, -t) + std::pow(b, -t) - 1, -1 / t);
}
double frank_closed(double t, double a, double b) {
  if (t < 0) return -std::log1p(std::expm1(-t * a) * std::expm1(-t * b) / std::expm1(-t)) / t;
  // For t > 0 the log1p argument is near -1; expand the numerator instead.
  const long double e = std::exp(-static_cast<long double>(t));
  const long double ea = std::exp(-static_cast<long double>(t) * a);
  const long double eb = std::exp(-static_cast<long double>(t) * b);
  const long double num = e - ea - eb + ea * eb;
  return static_cast<double>(-std::log(num / std::expm1(-static_cast<long double>(t))) / t);
}

}  // namespace

TEST_SUITE("classical") {

TEST_CASE("normal kernels") {
  CHECK(inv_norm_cdf(0.5) == 0.0);
  CHECK(inv_norm_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK_THROWS_AS(inv_norm_cdf(0.0), CopulaError);
  CHECK_THROWS_AS(inv_norm_cdf(1.0), CopulaError);

  const boost::math::normal_distribution<double> n01;
  CounterRng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double p = rng.uniform();
    CHECK(std::abs(norm_cdf(inv_norm_cdf(p)) - p) <= 1e-13);
  }
  for (double x = -8; x <= 8; x += 0.37) {
    CHECK(std::abs(norm_cdf(x) - boost::math::cdf(n01, x)) < 1e-15);
  }
}

TEST_CASE("bivariate normal cdf") {
  for (double r : {-0.99, -0.5, 0.0, 0.5, 0.99}) {
    CHECK(std::abs(bvn_cdf(0, 0, r) - (0.25 + std::asin(r) / (2 * kPi))) <= 1e-10);
  }
  CHECK(bvn_cdf(0, 0, 1.0) == doctest::Approx(0.5));
  CHECK(bvn_cdf(0.3, -0.3, -1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bvn_cdf(0.7, INFINITY, 0.4) == doctest::Approx(norm_cdf(0.7)).epsilon(1e-15));

  CounterRng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double h = nmtest::uniform_in(rng, -4, 4);
    const double k = nmtest::uniform_in(rng, -4, 4);
    const double r = nmtest::uniform_in(rng, -0.995, 0.995);
    CHECK(std::abs(bvn_cdf(h, k, r) - bvn_owen(h, k, r)) <= 1e-10);
  }
}

TEST_CASE("closed forms at the centre") {
  CHECK(classical_cdf(Family::Clayton, 1, 0.5, 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(classical_cdf(Family::AMH, 1, 0.5, 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(cdf(CopulaModel::frank(0.0), 0.5, 0.5) == 0.25);
  CHECK(CopulaModel::frank(0.0).family() == Family::Product);
  CHECK(classical_cdf(Family::Gaussian, 0, 0.3, 0.6) == doctest::Approx(0.18).epsilon(1e-14));
  CHECK(classical_density(Family::FGM, 0.7, 0.5, 0.2) == 1.0);
  CHECK(classical_density(Family::Gaussian, 0.0, 0.2, 0.9) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("generator composition matches the textbook formulas") {
  CounterRng rng(13);
  for (int i = 0; i < 3000; ++i) {
    const auto [a, b] = nmtest::point(rng, 1e-4);
    const double ta = nmtest::uniform_in(rng, -1, 1);
    const double tc = nmtest::uniform_in(rng, 0.05, 20);
    double tf = nmtest::uniform_in(rng, -30, 30);
    if (std::abs(tf) < 1e-3) tf = 1e-3;
    CHECK(classical_cdf(Family::AMH, ta, a, b) ==
          doctest::Approx(amh_closed(ta, a, b)).epsilon(1e-12));
    CHECK(classical_cdf(Family::Clayton, tc, a, b) ==
          doctest::Approx(clayton_closed(tc, a, b)).epsilon(1e-11));
    CHECK(classical_cdf(Family::Frank, tf, a, b) ==
          doctest::Approx(frank_closed(tf, a, b)).epsilon(1e-11));
  }
}

TEST_CASE("generators") {
  for (Family f : {Family::AMH, Family::Clayton, Family::Frank}) {
    CounterRng rng(static_cast<std::uint64_t>(f) + 100);
    for (int rep = 0; rep < 5; ++rep) {
      const Generator g(f, nmtest::theta_for(f, rng));
      CHECK(generator_is_valid(g));
      CHECK(g.phi(1.0) == doctest::Approx(0.0));
      for (int k = 1; k < 1000; ++k) {
        const double u = k / 1000.0;
        CHECK(std::abs(g.phi_inverse(g.phi(u)) - u) <= 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(Generator(Family::FGM, 0.5), CopulaError);
}

TEST_CASE("domains") {
  CHECK_THROWS_AS(validate_classical(Family::Clayton, 0.0), CopulaError);
  CHECK_THROWS_AS(validate_classical(Family::Clayton, -0.5), CopulaError);
  CHECK_THROWS_AS(validate_classical(Family::AMH, 1.01), CopulaError);
  CHECK_THROWS_AS(validate_classical(Family::FGM, -1.5), CopulaError);
  CHECK_THROWS_AS(validate_classical(Family::Gaussian, 1.2), CopulaError);
  CHECK_THROWS_AS(validate_classical(Family::Frank, INFINITY), CopulaError);
  CHECK_NOTHROW(validate_classical(Family::Gaussian, 1.0));
  try {
    classical_density(Family::Gaussian, 1.0, 0.3, 0.4);
    FAIL("expected NoDensity");
  } catch (const CopulaError& e) {
    CHECK(e.code() == ErrorCode::NoDensity);
  }
}

TEST_CASE("symmetry of the exchangeable families") {
  CounterRng rng(19);
  for (Family f : {Family::AMH, Family::Clayton, Family::Frank, Family::FGM, Family::Gaussian}) {
    for (int rep = 0; rep < 200; ++rep) {
      const double t = nmtest::theta_for(f, rng);
      const auto [a, b] = nmtest::point(rng);
      CHECK(std::abs(classical_cdf(f, t, a, b) - classical_cdf(f, t, b, a)) <= 1e-14);
    }
  }
}

TEST_CASE("density against finite differences of the cdf") {
  auto stencil = [](Family f, double t, double a, double b, double h) {
    return (classical_cdf(f, t, a + h, b + h) - classical_cdf(f, t, a + h, b - h) -
            classical_cdf(f, t, a - h, b + h) + classical_cdf(f, t, a - h, b - h)) /
           (4 * h * h);
  };
  // Richardson step on the mixed difference, error O(h^4).
  auto fd = [&](Family f, double t, double a, double b) {
    return (4 * stencil(f, t, a, b, 5e-4) - stencil(f, t, a, b, 1e-3)) / 3;
  };
  CHECK(std::abs(classical_density(Family::Clayton, 1, 0.5, 0.5) -
                 fd(Family::Clayton, 1, 0.5, 0.5)) <= 1e-6);

  CounterRng rng(23);
  for (Family f : {Family::AMH, Family::Clayton, Family::Frank, Family::FGM, Family::Gaussian}) {
    for (int rep = 0; rep < 1000; ++rep) {
      // Moderate parameters and an interior box keep the stencil well inside
      // the region where its truncation error is below the tolerance.
      double t = nmtest::theta_for(f, rng);
      if (f == Family::Clayton) t = std::min(t, 5.0);
      if (f == Family::Frank) t = std::clamp(t, -10.0, 10.0);
      if (f == Family::Gaussian) t = std::clamp(t, -0.8, 0.8);
      const auto [a, b] = nmtest::point(rng, 0.05);
      const double c = classical_density(f, t, a, b);
      CHECK(c >= 0.0);
      CHECK(std::abs(c - fd(f, t, a, b)) <= 1e-6 * std::max(1.0, c));
      CHECK(classical_log_density(f, t, a, b) == doctest::Approx(std::log(c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("densities integrate to one") {
  using boost::math::quadrature::gauss;
  const std::vector<std::pair<Family, double>> cases{
      {Family::AMH, 0.6}, {Family::Clayton, 1.5}, {Family::Frank, -4.0},
      {Family::FGM, -0.7}, {Family::Gaussian, 0.4}};
  for (const auto& [f, t] : cases) {
    // Total mass of [eps, 1 - eps]^2 from the density equals its C-volume.
    // Panels cluster near the corners, where Clayton peaks.
    const double e = 0.01;
    const double cuts[] = {e, 0.02, 0.05, 0.15, 0.5, 0.85, 0.95, 0.98, 1 - e};
    auto panels = [&](auto&& fn) {
      double s = 0;
      for (std::size_t k = 0; k + 1 < std::size(cuts); ++k) {
        s += gauss<double, 30>::integrate(fn, cuts[k], cuts[k + 1]);
      }
      return s;
    };
    auto inner = [&](double x) {
      return panels([&](double y) { return classical_density(f, t, x, y); });
    };
    const double mass = panels(inner);
    const double lo[2] = {e, e}, hi[2] = {1 - e, 1 - e};
    INFO(family_name(f));
    CHECK(mass == doctest::Approx(copula_volume(CopulaModel::make(f, t), lo, hi)).epsilon(1e-8));
  }
}

TEST_CASE("conditional cdf against finite differences") {
  const double h = 1e-6;
  CounterRng rng(29);
  for (Family f : {Family::AMH, Family::Clayton, Family::Frank, Family::FGM, Family::Gaussian}) {
    for (int rep = 0; rep < 300; ++rep) {
      const double t = nmtest::theta_for(f, rng);
      const auto [a, b] = nmtest::point(rng, 0.01);
      const double fd = (classical_cdf(f, t, a + h, b) - classical_cdf(f, t, a - h, b)) / (2 * h);
      CHECK(std::abs(classical_conditional_cdf(f, t, Margin::U2, a, b) - fd) <= 1e-6);
    }
  }
}

TEST_CASE("frank stays finite at large parameters") {
  for (double t : {-45.0, 45.0, 300.0}) {
    for (double a : {1e-6, 0.3, 0.999999}) {
      const double c = classical_cdf(Family::Frank, t, a, 0.4);
      CHECK(std::isfinite(c));
      CHECK(c >= 0.0);
      CHECK(c <= std::min(a, 0.4));
      CHECK(std::isfinite(classical_log_density(Family::Frank, t, a, 0.4)));
    }
  }
}

TEST_CASE("axioms at random parameters") {
  CounterRng rng(37);
  for (Family f : {Family::AMH, Family::Clayton, Family::Frank, Family::FGM, Family::Gaussian}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto m = nmtest::random_model(f, rng);
      const auto report = check_copula_axioms(m, 2000, rep + 1);
      INFO(m.describe());
      CHECK(report.passed());
    }
  }
}

}  // TEST_SUITE
