// Solution-path and bootstrap timings on random frames.
//
//   ./build/benchmarks/path_benchmark --benchmark_filter=ComputePath
//
// ComputePath/n/5 should scale as n log n (doubling n costs ~2.1x).

#include <limits>
#include <random>

#include "benchmark/benchmark.h"
#include "qini/frame.h"
#include "qini/inference.h"
#include "qini/path.h"

namespace {

qini::EvalFrame RandomFrame(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cost(0.05, 1.0);
  std::normal_distribution<double> effect(0.2, 1.0);
  qini::Matrix tau(n, k), c(n, k), scores(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      tau(i, j) = effect(rng);
      c(i, j) = cost(rng);
      scores(i, j) = tau(i, j) + effect(rng);
    }
  }
  return qini::EvalFrame(std::move(tau), std::move(c), std::move(scores));
}

void BM_ComputePath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const qini::EvalFrame frame = RandomFrame(n, k, 7);
  for (auto _ : state) {
    auto path =
        qini::ComputePath(frame, std::numeric_limits<double>::infinity());
    benchmark::DoNotOptimize(path.events.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputePath)
    ->ArgsProduct({{100000, 200000, 400000, 1000000}, {5}})
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNLogN);

void BM_HullTable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const qini::EvalFrame frame = RandomFrame(n, 5, 11);
  for (auto _ : state) {
    qini::HullTable hulls(frame);
    benchmark::DoNotOptimize(&hulls);
  }
}
BENCHMARK(BM_HullTable)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_BootstrapCurve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const qini::EvalFrame frame = RandomFrame(n, 2, 3);
  qini::BootstrapOptions options;
  options.b_max = 0.5;
  options.grid_size = 10;
  options.replicates = 200;
  for (auto _ : state) {
    auto est = qini::BootstrapCurve(frame, {}, options);
    benchmark::DoNotOptimize(est.std_err.data());
  }
}
BENCHMARK(BM_BootstrapCurve)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
