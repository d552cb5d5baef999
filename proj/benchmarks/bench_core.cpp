#include <benchmark/benchmark.h>

#include "rconley/conley.hpp"
#include "rconley/harness.hpp"

using namespace rconley;

namespace {

FiberedEnclosure contraction(int cells, int T) {
  const auto g = make_grid({-1.5, -1.5}, {1.5, 1.5}, {cells, cells});
  return build_enclosure(MapFamily(RandomDiagonal{2, {}}), g, sample_path(NoiseModel::uniform(0.3, 0.7, 2), 0, T));
}

void BM_BuildEnclosure(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(contraction(cells, 16));
  state.SetLabel(std::to_string(cells) + "x" + std::to_string(cells) + ", T=16");
}
BENCHMARK(BM_BuildEnclosure)->Arg(24)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_InvariantSet(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  const auto e = contraction(cells, 16);
  const auto n = FiberedSet::constant(boxes_meeting_ball(e.grid(), std::vector<double>{0.0, 0.0}, 1.0), 16);
  for (auto _ : state) benchmark::DoNotOptimize(invariant_set(e, n));
}
BENCHMARK(BM_InvariantSet)->Arg(24)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_ContinuationSweep(benchmark::State& state) {
  SweepConfig cfg;
  cfg.system = MapFamily(RandomDiagonal{2, {}});
  cfg.noise = NoiseModel::uniform(0.3, 0.7, 2);
  cfg.grid = make_grid({-1.5, -1.5}, {1.5, 1.5}, {48, 48});
  cfg.half_window = 16;
  cfg.lambdas = {1.0};
  cfg.seeds = {0, 1, 2, 3};
  cfg.n = Region::ball({0.0, 0.0}, 1.0);
  cfg.checks = {"isolating", "block"};
  for (auto _ : state) benchmark::DoNotOptimize(continuation_sweep(cfg));
}
BENCHMARK(BM_ContinuationSweep)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
