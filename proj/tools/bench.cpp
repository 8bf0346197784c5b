// Serial against parallel kernels. Each benchmark takes the execution mode
// as its first argument (0 serial, 1 parallel).

#include "thompson/actiongraph.hpp"
#include "thompson/semiconj.hpp"
#include "thompson/sampling.hpp"

#include <benchmark/benchmark.h>

using namespace thompson;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void qt_ball(benchmark::State& state) {
  const auto base = RationalPoint::parse("(001)");
  for (auto _ : state) benchmark::DoNotOptimize(build_qt_ball(base, static_cast<int>(state.range(1)), mode(state)));
  label(state);
}

void schreier_ball(benchmark::State& state) {
  const auto& s = standard_generators();
  const auto gens = symmetrize({{"x0", s.x0}, {"x1", s.x1}, {"swap", s.swap}, {"cycle", s.cycle}});
  const auto base = RationalPoint::parse("1(0)");
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_action_graph(gens, base, static_cast<int>(state.range(1)), 1u << 20, mode(state)));
  }
  label(state);
}

void bottleneck(benchmark::State& state) {
  const auto ball = build_qt_ball(RationalPoint::parse("(001)"), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(bottleneck_check(ball, 2, PairSampling{}, mode(state)));
  label(state);
}

void brackets(benchmark::State& state) {
  Rng rng(7);
  std::vector<RationalPoint> points;
  for (int i = 0; i < 8; ++i) points.push_back(random_point(rng, 5, 4));
  for (auto _ : state) {
    // A fresh estimator per iteration so window samples are not reused.
    PhiEstimator estimator(Embedding::standard());
    for (const auto& k : points) benchmark::DoNotOptimize(estimator.bracket(k, static_cast<int>(state.range(1)), mode(state)));
  }
  label(state);
}

}  // namespace

BENCHMARK(qt_ball)->ArgsProduct({{0, 1}, {12, 16}})->Unit(benchmark::kMillisecond);
BENCHMARK(schreier_ball)->ArgsProduct({{0, 1}, {8, 10}})->Unit(benchmark::kMillisecond);
BENCHMARK(bottleneck)->ArgsProduct({{0, 1}, {8, 10}})->Unit(benchmark::kMillisecond);
BENCHMARK(brackets)->ArgsProduct({{0, 1}, {6, 8}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
