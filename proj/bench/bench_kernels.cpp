#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "sprice/geometry.hpp"
#include "sprice/kernels.hpp"
#include "sprice/search.hpp"

namespace {

using namespace sprice;

struct Fixture {
  Region region;
  CostTable cost;
  PointSet all;
  std::vector<double> v;
};

Fixture make(std::size_t side) {
  Fixture f{build_grid_region(side, side, Rect{{0, 1}, {0, 1}}, std::nullopt), {}, {}, {}};
  f.cost = eval_cost(CostKernel::metric_power(1.0), f.region);
  f.all = f.region.all_points();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < f.region.size(); ++i) f.v.push_back(u(rng));
  return f;
}

void BM_EnvelopeSerial(benchmark::State& state) {
  const auto f = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::envelope(f.cost, f.all, f.v));
  state.SetComplexityN(static_cast<long>(f.region.size()));
}

void BM_EnvelopeParallel(benchmark::State& state) {
  const auto f = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(envelope(f.cost, f.all, f.v));
  state.SetComplexityN(static_cast<long>(f.region.size()));
}

void BM_TransformSerial(benchmark::State& state) {
  const auto f = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::transform(f.cost, f.v, f.all));
}

void BM_TransformParallel(benchmark::State& state) {
  const auto f = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transform(f.cost, f.v, f.all));
}

// L^d candidates of a cheap separable objective.
void BM_Exhaustive(benchmark::State& state) {
  const auto dims = static_cast<std::size_t>(state.range(0));
  SearchConfig cfg;
  cfg.mode = SearchMode::Exhaustive;
  cfg.levels = 6;
  const Objective obj = [](std::span<const double> g) {
    double s = 0.0;
    for (double x : g) s -= (x - 0.3) * (x - 0.3);
    return s;
  };
  for (auto _ : state) benchmark::DoNotOptimize(maximize(dims, 0.0, 1.0, cfg, obj).score);
}

}  // namespace

BENCHMARK(BM_EnvelopeSerial)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnvelopeParallel)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransformSerial)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransformParallel)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Exhaustive)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
