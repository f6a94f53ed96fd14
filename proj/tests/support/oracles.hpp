#pragma once

// Straight-line reference implementations used as test oracles. They are
// deliberately naive (plain sums, full rescans) and share no code with the
// library kernels.

#include "qstrat/market_data.hpp"
#include "qstrat/strategies.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qstrat::oracle {

std::vector<double> sma(std::span<const double> x, std::size_t n);
std::vector<double> ema(std::span<const double> x, std::size_t n, double smoothing = 2.0);
std::vector<double> efficiency_ratio(std::span<const double> x, std::size_t m);
std::vector<double> ama(std::span<const double> x, std::size_t n_long, std::size_t n_short,
                        std::size_t ada_win, int matype);
std::vector<double> rsi(std::span<const double> closes, std::size_t n);
std::vector<double> rmi(std::span<const double> closes, std::size_t n, std::size_t m);
std::vector<double> aroon_up(std::span<const double> highs, std::size_t n);
std::vector<double> aroon_down(std::span<const double> lows, std::size_t n);
std::vector<double> typical_price(const OhlcvSeries& s);
std::vector<double> true_range(const OhlcvSeries& s);
/// Population standard deviation of x[i-n+1..i]; 0 before the window fills.
std::vector<double> rolling_std(std::span<const double> x, std::size_t n);

/// Plain two-pass population standard deviation.
double std_pop(std::span<const double> x);
double mean(std::span<const double> x);

/// O(n^2) scan over every (peak, trough) pair.
double max_drawdown(std::span<const double> v);

/// Daily ratio scaled up: (mean - rf) / std * sqrt(days).
double sharpe_daily_scaled(std::span<const double> r, double rf, double days);
/// Ratio of annualized mean excess return to annualized volatility.
double sharpe_annualized_moments(std::span<const double> r, double rf, double days);
double information_ratio_daily_scaled(std::span<const double> r, std::span<const double> b,
                                 double days);

/// Indices i >= start where a crosses strictly above (up) or below (down) b.
struct Crosses {
  std::vector<std::size_t> up;
  std::vector<std::size_t> down;
};
Crosses crosses(std::span<const double> a, std::span<const double> b, std::size_t start);

/// Alternating long-only signals from a set of candidate entry and exit bars.
SignalList alternate(const std::vector<std::size_t>& entries, const std::vector<std::size_t>& exits);

/// Equity path by direct replay: for each bar, the product of close ratios
/// over bars held so far, scaled by the first entry close.
std::vector<double> replay_equity(std::span<const double> closes, std::span<const SignalEvent> s);

} // namespace qstrat::oracle
