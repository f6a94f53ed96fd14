#include "bench_data.hpp"

#include "qstrat/indicators.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace qstrat;

void BM_Sma(benchmark::State& state) {
  const auto c = bench::walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sma(c, 50));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sma)->Arg(3000)->Arg(100000);

void BM_Ema(benchmark::State& state) {
  const auto c = bench::walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ema(c, 50));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ema)->Arg(3000)->Arg(100000);

void BM_Ama(benchmark::State& state) {
  const auto c = bench::walk(static_cast<std::size_t>(state.range(0)));
  const AmaParams p{51, 5, 12, state.range(1) == 1 ? AmaType::Ema : AmaType::Sma};
  for (auto _ : state) benchmark::DoNotOptimize(ama(c, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ama)->Args({3000, 1})->Args({3000, 2})->Args({100000, 1})->Args({100000, 2});

void BM_Rsi(benchmark::State& state) {
  const auto c = bench::walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rsi(c, 14));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rsi)->Arg(3000)->Arg(100000);

void BM_Aroon(benchmark::State& state) {
  const auto s = bench::series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(aroon(s, 25));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Aroon)->Arg(3000)->Arg(100000);

void BM_Bollinger(benchmark::State& state) {
  const auto s = bench::series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bollinger(s, 20, 2.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bollinger)->Arg(3000)->Arg(100000);

void BM_Keltner(benchmark::State& state) {
  const auto s = bench::series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(keltner(s, PlainMa{MaKind::Sma, 20}, 2.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Keltner)->Arg(3000)->Arg(100000);

void BM_Macd(benchmark::State& state) {
  const auto c = bench::walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(macd(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Macd)->Arg(3000)->Arg(100000);

} // namespace
