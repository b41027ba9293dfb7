#include <benchmark/benchmark.h>

#include <lorenzflow/lorenzflow.hpp>

using namespace lorenzflow;

namespace {

struct Pair {
  Density a, b;
  Grid1D fg;
};

Pair pair(std::size_t n) {
  const auto x = Grid1D::nodes(-2.0, 2.0, n);
  return {truncated_gaussian(x, -0.3, 0.8), truncated_gaussian(x, 0.4, 1.1), Grid1D::cdf(n)};
}

void BM_GeodesicAction(benchmark::State& state) {
  const auto p = pair(256);
  const auto geo = geodesic_w2(p.a, p.b, static_cast<std::size_t>(state.range(0)), p.fg);
  for (auto _ : state) benchmark::DoNotOptimize(action(GradientStructure::W2(), geo));
}
BENCHMARK(BM_GeodesicAction)->Arg(16)->Arg(32)->Arg(64);

void BM_TransferCheck(benchmark::State& state) {
  const auto p = pair(256);
  const auto geo = geodesic_w2(p.a, p.b, 32, p.fg);
  const auto S = GradientStructure::W2M(mobility_preset("saturating"));
  for (auto _ : state) benchmark::DoNotOptimize(transfer_check(S, geo, p.a.grid()));
}
BENCHMARK(BM_TransferCheck)->Unit(benchmark::kMillisecond);

void BM_MinimizeLorenz(benchmark::State& state) {
  const auto p = pair(256);
  const auto geo = geodesic_w2(p.a, p.b, 16, p.fg);
  OptimizerOptions opts;
  opts.iterations = static_cast<std::size_t>(state.range(0));
  const auto S = GradientStructure::W2M(mobility_preset("saturating"));
  for (auto _ : state) benchmark::DoNotOptimize(minimize_action(S, geo, opts));
}
BENCHMARK(BM_MinimizeLorenz)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ClosedFormW2(benchmark::State& state) {
  const auto p = pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(w2_distance_closed_form(p.a, p.b));
}
BENCHMARK(BM_ClosedFormW2)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
