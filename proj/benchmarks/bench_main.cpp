#include <benchmark/benchmark.h>

#include "martinpot/accessibility.hpp"
#include "martinpot/closed_forms.hpp"
#include "martinpot/simulation.hpp"

using namespace martinpot;

static void BM_BallExitSample(benchmark::State& state) {
  RngStream rng(1, 0);
  const Point c{0.0, 0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(sample_ball_exit(rng, 1.5, 3, c, 1.0));
}
BENCHMARK(BM_BallExitSample);

static void BM_BallGreen(benchmark::State& state) {
  const BallSpec b({0.0, 0.0}, 1.0, 1.3);
  const Point x{0.2, 0.1}, y{-0.4, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(ball_green(b, x, y));
}
BENCHMARK(BM_BallGreen);

// One walk-on-spheres chain per iteration; the argument selects alpha * 10.
static void BM_WosExitHalfSpace(benchmark::State& state) {
  const ProcessSpec s = make_stable(static_cast<double>(state.range(0)) / 10.0, 2);
  const Domain d = intersect({ball({0.0, 0.0}, 4.0), halfspace({0.0, 1.0}, 0.0)});
  std::uint64_t i = 0;
  std::int64_t steps = 0;
  for (auto _ : state) {
    RngStream rng(2, i++);
    steps += wos_exit(rng, s, d, {0.3, 0.5}).steps;
  }
  state.counters["steps/chain"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_WosExitHalfSpace)->Arg(5)->Arg(10)->Arg(15);

static void BM_GreenSamples(benchmark::State& state) {
  const ProcessSpec s = make_stable(1.5, 2);
  const Domain d = ball({0.0, 0.0}, 1.0);
  const std::vector<Point> targets{{0.3, 0.2}, {-0.4, 0.0}, {0.0, -0.5}};
  for (auto _ : state) benchmark::DoNotOptimize(green_samples(s, d, {0.1, 0.1}, targets, {1000, 3, 1}));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_GreenSamples)->Unit(benchmark::kMillisecond);

static void BM_PathStep(benchmark::State& state) {
  const ProcessSpec s = state.range(0) ? make_geometric_stable(1.0, 2, 2) : make_stable(1.0, 2);
  RngStream rng(4, 0);
  for (auto _ : state) benchmark::DoNotOptimize(path_step(rng, s, 1e-3));
}
BENCHMARK(BM_PathStep)->Arg(0)->Arg(1);

static void BM_ThornInfinityTest(benchmark::State& state) {
  const ProcessSpec s = make_stable(1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(thorn_infinity_test(s, Profile::log_power(0.3)));
}
BENCHMARK(BM_ThornInfinityTest)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
