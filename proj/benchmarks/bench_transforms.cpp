#include <benchmark/benchmark.h>

#include <lorenzflow/lorenzflow.hpp>

using namespace lorenzflow;

namespace {

Density gauss(std::size_t n) { return truncated_gaussian(Grid1D::nodes(-6.0, 6.0, n), 0.2, 1.0); }

void BM_LorenzMap(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rho = gauss(n);
  const auto fg = Grid1D::cdf(n);
  for (auto _ : state) benchmark::DoNotOptimize(lorenz_map(rho, fg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LorenzMap)->RangeMultiplier(2)->Range(128, 4096)->Complexity();

void BM_DensityFromLorenz(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rho = gauss(n);
  const auto L = lorenz_map(rho, Grid1D::cdf(n));
  for (auto _ : state) benchmark::DoNotOptimize(density_from_lorenz(L, rho.grid()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DensityFromLorenz)->RangeMultiplier(2)->Range(128, 4096)->Complexity();

void BM_DtLorenz(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rho = gauss(n);
  const auto fg = Grid1D::cdf(n);
  std::mt19937_64 rng(1);
  const auto h = random_perturbation(rho.grid(), -2.0, 2.0, rng, true);
  for (auto _ : state) benchmark::DoNotOptimize(dt_lorenz(rho, h, fg));
}
BENCHMARK(BM_DtLorenz)->Arg(256)->Arg(1024);

void BM_CovFrechet(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rho = gauss(n);
  const auto L = lorenz_map(rho, Grid1D::cdf(n));
  const auto dF = frechet(Functional::entropy(Side::lorenz), L);
  for (auto _ : state) benchmark::DoNotOptimize(cov_frechet(dF, rho));
}
BENCHMARK(BM_CovFrechet)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
