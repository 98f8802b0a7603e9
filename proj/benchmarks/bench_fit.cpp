#include <map>

#include <benchmark/benchmark.h>

#include <esshist/esshist.hpp>

namespace {

using namespace esshist;

const QuantileTable& table_for(std::size_t n) {
  static std::map<std::size_t, QuantileTable> tables;
  auto it = tables.find(n);
  if (it == tables.end()) {
    const QuantileCache cache(ESSHIST_BENCH_CACHE_DIR);
    it = tables.emplace(n, cache.get_or_simulate(n, 2000, 1, default_alpha_grid())).first;
  }
  return it->second;
}

void BM_FitClaw(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto sample = density_by_name("claw").sample(1, n);
  const auto& table = table_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(essential_histogram(sample, 0.1, table));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitClaw)->RangeMultiplier(2)->Range(256, 8192)->Unit(benchmark::kMillisecond)
    ->Complexity();

void BM_FitUnpruned(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto sample = density_by_name("claw").sample(1, n);
  FitOptions options;
  options.solver = Solver::kUnpruned;
  const auto& table = table_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(essential_histogram(sample, 0.1, table, options));
}
BENCHMARK(BM_FitUnpruned)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Features(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto sample = density_by_name("claw").sample(1, n);
  const auto& table = table_for(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(significant_feature_intervals(sample, 0.1, table));
  }
}
BENCHMARK(BM_Features)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_MultiscaleStatistic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_statistics(n, 20, 7, {.workers = 1}));
  }
}
BENCHMARK(BM_MultiscaleStatistic)->Arg(500)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_SimulateRep(benchmark::State& state) {
  const auto truth = density_by_name("claw");
  const auto& table = table_for(1000);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const auto h = essential_histogram(truth.sample(3, 1000, rep++), 0.1, table);
    benchmark::DoNotOptimize(metrics(h, truth));
  }
}
BENCHMARK(BM_SimulateRep)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
