#include <benchmark/benchmark.h>

#include "tfs/baselines.hpp"
#include "tfs/experiments.hpp"
#include "tfs/similarity.hpp"
#include "tfs/transform.hpp"

namespace {

const std::pair<tfs::Signal, tfs::Signal>& pulse_pair() {
  static const auto pair = tfs::generate_chirp_pair({}, {0.0, 1}, {0.0, 2});
  return pair;
}

void BM_Nmwt(benchmark::State& state) {
  const auto grid = tfs::FrequencyGrid::linear(1.0, static_cast<double>(state.range(0)), 1.0);
  const tfs::Signal& f = pulse_pair().first;
  for (auto _ : state) benchmark::DoNotOptimize(tfs::nmwt(f, grid, {4.0}));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size() * f.size()));
}
BENCHMARK(BM_Nmwt)->Arg(15)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_SimilarityFunction(benchmark::State& state) {
  const tfs::ExperimentConfig cfg = tfs::reproduction_config();
  const auto& [f1, f2] = pulse_pair();
  const auto a = tfs::tfps(tfs::nmwt(f1, cfg.similarity.grid, cfg.similarity.window));
  const auto b = tfs::tfps(tfs::nmwt(f2, cfg.similarity.grid, cfg.similarity.window));
  const tfs::Region region = std::get<tfs::Region>(cfg.similarity.region);
  const auto half = static_cast<std::ptrdiff_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(tfs::similarity_function(a, b, region, {-half, half}));
}
BENCHMARK(BM_SimilarityFunction)->Arg(16)->Arg(675)->Unit(benchmark::kMillisecond);

void BM_SimilarityAnalyze(benchmark::State& state) {
  const tfs::ExperimentConfig cfg = tfs::reproduction_config();
  const auto& [f1, f2] = pulse_pair();
  for (auto _ : state) benchmark::DoNotOptimize(tfs::similarity_analyze(f1, f2, cfg.similarity));
}
BENCHMARK(BM_SimilarityAnalyze)->Unit(benchmark::kMillisecond);

void BM_CcTde(benchmark::State& state) {
  const auto& [f1, f2] = pulse_pair();
  for (auto _ : state) benchmark::DoNotOptimize(tfs::cc_tde(f1, f2, 1350));
}
BENCHMARK(BM_CcTde)->Unit(benchmark::kMillisecond);

void BM_GccTde(benchmark::State& state) {
  const auto& [f1, f2] = pulse_pair();
  const auto w = static_cast<tfs::GccWeighting>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tfs::gcc_tde(f1, f2, w, 1350));
}
BENCHMARK(BM_GccTde)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_PearsonMaxLag(benchmark::State& state) {
  const auto& [f1, f2] = pulse_pair();
  for (auto _ : state) benchmark::DoNotOptimize(tfs::pearson_max_lag(f1, f2, 1350));
}
BENCHMARK(BM_PearsonMaxLag)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
