#include "bench_data.hpp"

#include "qstrat/backtester.hpp"
#include "qstrat/sweep.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace qstrat;

void BM_TwoAverageBacktest(benchmark::State& state) {
  const auto s = bench::series(static_cast<std::size_t>(state.range(0)));
  const StrategyConfig cfg = strategy::TwoAverage{};
  for (auto _ : state) benchmark::DoNotOptimize(run_strategy(s, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TwoAverageBacktest)->Arg(3000)->Arg(100000);

void BM_AdaptivePriceCross(benchmark::State& state) {
  const auto s = bench::series(static_cast<std::size_t>(state.range(0)));
  const StrategyConfig cfg = strategy::PriceCross{AmaParams{51, 5, 12, AmaType::Sma}};
  for (auto _ : state) benchmark::DoNotOptimize(run_strategy(s, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AdaptivePriceCross)->Arg(3000);

void BM_Sweep(benchmark::State& state) {
  const auto s = bench::series(3000);
  SweepSpec spec;
  spec.base = ConfigTree::parse("strategy.kind = two_average\n");
  spec.ranges.push_back(parse_param_range("fast.period", "2:20:1"));
  spec.ranges.push_back(parse_param_range("slow.period", "20:100:5"));
  spec.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(s, spec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid_size(spec)));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace
