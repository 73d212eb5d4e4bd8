#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "covertnet/channel.hpp"
#include "covertnet/spatial_index.hpp"
#include "covertnet/twohop.hpp"

using namespace covertnet;

static void BM_KlGaussian(benchmark::State& state) {
  double x = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kl_gaussian(x, 1.0));
    x = x < 10.0 ? x * 1.001 : 1e-4;
  }
}
BENCHMARK(BM_KlGaussian);

static void BM_GridIndexNearest(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  Stream s(1);
  std::vector<Point> pts(m);
  for (auto& p : pts) p = Disk::sample(s);
  std::vector<std::size_t> ids(m);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  const GridIndex index(pts, ids);
  for (auto _ : state) benchmark::DoNotOptimize(index.nearest(Disk::sample(s)));
}
BENCHMARK(BM_GridIndexNearest)->RangeMultiplier(4)->Range(256, 65536);

static void BM_AssignPairs(benchmark::State& state) {
  NetworkConfig c;
  c.n = state.range(0);
  const Placement p = sample_placement(c, 1);
  for (auto _ : state) {
    Stream roles(2);
    benchmark::DoNotOptimize(assign_pairs(p, c.theta, c.centric, c.preservation_radius(), roles));
  }
}
BENCHMARK(BM_AssignPairs)->RangeMultiplier(4)->Range(256, 16384);

static void BM_RunSlot(benchmark::State& state) {
  NetworkConfig c;
  c.n = state.range(0);
  const Placement p = sample_placement(c, 1);
  Stream roles(2);
  const PairAssignment a = assign_pairs(p, c.theta, c.centric, c.preservation_radius(), roles);
  const bool rates = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_slot(p, a, 1e-6, channel_of(c), Phase::kSourceToRelay, rates));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RunSlot)->ArgsProduct({{256, 1024, 4096}, {0, 1}})->Unit(benchmark::kMicrosecond);

static void BM_SimulateCalibrated(benchmark::State& state) {
  NetworkConfig c;
  c.n = state.range(0);
  c.lambda = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c, 8));
}
BENCHMARK(BM_SimulateCalibrated)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
