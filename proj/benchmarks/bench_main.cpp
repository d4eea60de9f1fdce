#include <benchmark/benchmark.h>

#include "realspec/matrix_lab.hpp"
#include "realspec/quadrature.hpp"
#include "realspec/special.hpp"

using namespace realspec;

static void BM_BesselK0(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::bessel_k0(x));
    x = x < 40.0 ? x * 1.07 : 0.01;
  }
}
BENCHMARK(BM_BesselK0);

static void BM_ConvolutionRouteGaussian(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(prob_real_convolution_route(DistributionSpec::gaussian()).value);
}
BENCHMARK(BM_ConvolutionRouteGaussian)->Unit(benchmark::kMillisecond);

static void BM_ConvolutionRouteTabulated(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(prob_real_convolution_route(DistributionSpec::symmetric_beta(0.0, -0.5)).value);
}
BENCHMARK(BM_ConvolutionRouteTabulated)->Unit(benchmark::kMillisecond);

static void BM_CharacteristicRouteCauchy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(prob_real_cf_route(DistributionSpec::cauchy()).value);
}
BENCHMARK(BM_CharacteristicRouteCauchy)->Unit(benchmark::kMillisecond);

static void BM_CountRealEigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RandomStream rng(7);
  const Matrix m = random_matrix(n, DistributionSpec::gaussian(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(count_real_eigenvalues(m));
}
BENCHMARK(BM_CountRealEigenvalues)->Arg(2)->Arg(3)->Arg(8)->Arg(32);

static void BM_EstimatePnk(benchmark::State& state) {
  ExperimentConfig c;
  c.K = static_cast<int>(state.range(0));
  c.mode = ProductMode::Ordinary;
  c.samples = 100000;
  c.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_Pnk(c).phat(2));
  state.SetItemsProcessed(state.iterations() * c.samples);
}
BENCHMARK(BM_EstimatePnk)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
