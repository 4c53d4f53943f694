#include <benchmark/benchmark.h>

#include "nmcopula/association.hpp"
#include "nmcopula/classical.hpp"
#include "nmcopula/copula_core.hpp"
#include "nmcopula/empirical.hpp"
#include "nmcopula/inference.hpp"

using namespace nmcopula;

namespace {

PseudoSample nm_data(std::size_t n) {
  return pseudo_observations(RawSample(sample(CopulaModel::normal_mode(1.0, {2, 1}), n, 1)));
}

}  // namespace

static void BM_BvnCdf(benchmark::State& state) {
  double x = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvn_cdf(x, 0.3, 0.6));
    x = x > 2.0 ? -2.0 : x + 1e-3;
  }
}
BENCHMARK(BM_BvnCdf);

static void BM_InvNormCdf(benchmark::State& state) {
  double p = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inv_norm_cdf(p));
    p = p > 0.999 ? 1e-6 : p + 1e-4;
  }
}
BENCHMARK(BM_InvNormCdf);

static void BM_Sample(benchmark::State& state) {
  const auto family = static_cast<Family>(state.range(0));
  const auto model = CopulaModel::make(family, family == Family::Clayton ? 2.0 : 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sample(model, 1000, 7));
  state.SetLabel(std::string(family_name(family)));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Sample)
    ->Arg(static_cast<int>(Family::NormalMode))
    ->Arg(static_cast<int>(Family::Clayton))
    ->Arg(static_cast<int>(Family::Gaussian));

static void BM_MeasuresNumeric(benchmark::State& state) {
  const auto model = CopulaModel::normal_mode(0.8, {3, 2});
  const QuadSpec q{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(measures_numeric(model, q));
}
BENCHMARK(BM_MeasuresNumeric)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_EmpiricalAtSample(benchmark::State& state) {
  const auto ps = nm_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_copula_at_sample(ps));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EmpiricalAtSample)->Range(256, 16384)->Complexity();

static void BM_FitMple(benchmark::State& state) {
  const auto ps = nm_data(2000);
  const auto spec = standard_specs({2, 1})[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) benchmark::DoNotOptimize(fit_mple(spec, ps));
  state.SetLabel(spec.label());
}
BENCHMARK(BM_FitMple)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

static void BM_Cic(benchmark::State& state) {
  const auto ps = nm_data(2000);
  const auto spec = standard_specs({2, 1})[static_cast<std::size_t>(state.range(0))];
  const double warm = fit_mple(spec, ps).theta_hat;
  for (auto _ : state) benchmark::DoNotOptimize(cic(spec, ps, {warm, 1}));
  state.SetLabel(spec.label());
}
BENCHMARK(BM_Cic)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

static void BM_CompareModels(benchmark::State& state) {
  const auto ps = nm_data(2000);
  const auto specs = standard_specs({2, 1});
  for (auto _ : state) benchmark::DoNotOptimize(compare_models(specs, ps));
}
BENCHMARK(BM_CompareModels)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
