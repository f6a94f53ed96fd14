#pragma once

#include "qstrat/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace qstrat::bench {

inline std::vector<double> walk(std::size_t len, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(2e-4, 0.011);
  std::vector<double> out(len);
  double price = 100.0;
  for (double& v : out) {
    price *= std::exp(step(rng));
    v = price;
  }
  return out;
}

inline OhlcvSeries series(std::size_t len, std::uint64_t seed = 1) {
  const auto closes = walk(len, seed);
  std::vector<Bar> bars(len);
  std::chrono::sys_days day{Date{std::chrono::year{2000}, std::chrono::January,
                                 std::chrono::day{3}}};
  for (std::size_t i = 0; i < len; ++i) {
    const double open = i == 0 ? closes[0] : closes[i - 1];
    bars[i].date = Date{day};
    bars[i].open = open;
    bars[i].close = closes[i];
    bars[i].high = std::max(open, closes[i]) * 1.004;
    bars[i].low = std::min(open, closes[i]) * 0.996;
    bars[i].volume = 1000;
    day += std::chrono::days{1};
  }
  return OhlcvSeries("BENCH", std::move(bars));
}

} // namespace qstrat::bench
