#pragma once

#include "qstrat/market_data.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qstrat {

inline constexpr std::size_t kTradingDaysPerYear = 252;

/// The full measure block for one backtest. Ratios (rr_*) are expressed as
/// end/start multiples, not percentages.
struct MetricReport {
  double initial_price = 0.0;
  double final_price = 0.0;
  double rr_whole = 1.0;
  double rr_per_year = 1.0;
  std::vector<double> rr_by_year;
  std::size_t buy_count = 0;
  double max_year_rr = 1.0;
  double min_year_rr = 1.0;
  double mdd = 0.0;
  /// Empty when the return series has zero variance.
  std::optional<double> sharpe_annual;
  std::optional<double> ir_annual;
  double vol_annual = 0.0;
  double return_fit_mean = 0.0;
  double return_fit_std = 0.0;

  bool operator==(const MetricReport&) const = default;
};

struct GaussianFit {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean anchored on the first element, so a constant series is returned
/// exactly.
double mean(std::span<const double> values);

/// Population (N-divisor) standard deviation.
double std_pop(std::span<const double> values);

/// r[i] = v[i+1] / v[i] - 1. Throws TooShort below two values and
/// NonPositivePrice for any value <= 0.
std::vector<double> daily_returns(std::span<const double> values);

/// Largest peak-to-trough fractional decline, single pass.
double max_drawdown(std::span<const double> values);

/// (mean(returns) - rf_daily) / std_pop(returns) * sqrt(trading_days).
/// Throws TooShort below two returns and ZeroVolatility when std is zero.
double sharpe_annual(std::span<const double> returns, double rf_daily = 0.0,
                     std::size_t trading_days = kTradingDaysPerYear);

/// Annualized mean/std of returns - benchmark.
double information_ratio_annual(std::span<const double> returns,
                                std::span<const double> benchmark,
                                std::size_t trading_days = kTradingDaysPerYear);

double volatility_annual(std::span<const double> returns,
                         std::size_t trading_days = kTradingDaysPerYear);

/// Equity ratio across each range. A range is measured from the equity at the
/// end of the previous range (initial_price for the first), so the product
/// telescopes to final / initial.
std::vector<double> yearly_rr(std::span<const double> equity, double initial_price,
                              std::span<const IndexRange> ranges);

GaussianFit gaussian_fit(std::span<const double> returns);

struct ReportInputs {
  std::span<const double> equity;
  double initial_price = 0.0;
  std::size_t buy_count = 0;
  /// Benchmark price path aligned with `equity`.
  std::span<const double> benchmark;
  std::size_t trading_days = kTradingDaysPerYear;
};

MetricReport build_report(const ReportInputs& inputs);

} // namespace qstrat
