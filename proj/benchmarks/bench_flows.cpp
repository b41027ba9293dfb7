#include <benchmark/benchmark.h>

#include <lorenzflow/lorenzflow.hpp>

using namespace lorenzflow;

namespace {

EvolutionSpec heat_spec(Side side) {
  EvolutionSpec s;
  s.side = side;
  s.structure = GradientStructure::W2();
  s.functional = Functional::entropy(side);
  s.dt = 1e-5;
  s.t_end = 1e-3;
  s.stride = 100;
  s.cfl = 0.25;
  return s;
}

// 100 RK4 steps of the W2 entropy flow.
void BM_HeatDensity(benchmark::State& state) {
  const auto rho = truncated_gaussian(Grid1D::nodes(-3.0, 3.0, static_cast<std::size_t>(state.range(0))), 0.0, 1.0);
  const auto spec = heat_spec(Side::density);
  for (auto _ : state) benchmark::DoNotOptimize(run(spec, rho));
}
BENCHMARK(BM_HeatDensity)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_HeatLorenz(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto L = lorenz_map(truncated_gaussian(Grid1D::nodes(-3.0, 3.0, n), 0.0, 1.0), Grid1D::cdf(n));
  const auto spec = heat_spec(Side::lorenz);
  for (auto _ : state) benchmark::DoNotOptimize(run(spec, L));
}
BENCHMARK(BM_HeatLorenz)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_StepMvfpe(benchmark::State& state) {
  const auto rho = truncated_gaussian(Grid1D::nodes(-5.0, 5.0, static_cast<std::size_t>(state.range(0))), 0.0, 1.0);
  Dynamics ou;
  ou.drift = [](double x, double, double, const FieldMoments&) { return -x; };
  for (auto _ : state) benchmark::DoNotOptimize(step_mvfpe(rho, ou, 0.0, 1e-5));
}
BENCHMARK(BM_StepMvfpe)->Arg(256)->Arg(1024);

void BM_StepLorenzPde(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto L = lorenz_map(truncated_gaussian(Grid1D::nodes(-6.0, 6.0, n), 0.0, 1.0), Grid1D::cdf(n));
  Dynamics cd;
  cd.diffusion = [](double, double, double r, const FieldMoments&) { return r; };
  for (auto _ : state) benchmark::DoNotOptimize(step_lorenz_pde(L, cd, 0.0, 1e-6));
}
BENCHMARK(BM_StepLorenzPde)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
