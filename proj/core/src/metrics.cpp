#include "qstrat/metrics.hpp"

#include "qstrat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qstrat {

namespace {

void require_positive(std::span<const double> values, std::string_view what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw Error(ErrorKind::NonPositivePrice,
                  fmt::format("{}: value {} at index {} is not a positive price", what,
                              values[i], i));
    }
  }
}

// Standard deviation at rounding-noise level relative to the mean is treated
// as exactly zero: the ratio would otherwise be an artefact of cancellation.
bool is_zero_volatility(double mean_value, double std_value) {
  constexpr double tolerance = 64.0 * std::numeric_limits<double>::epsilon();
  return std_value == 0.0 || std_value <= tolerance * std::abs(mean_value);
}

} // namespace

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double anchor = values[0];
  double acc = 0.0;
  for (double v : values) acc += v - anchor;
  return anchor + acc / static_cast<double>(values.size());
}

double std_pop(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

std::vector<double> daily_returns(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorKind::TooShort, "daily_returns: need >= 2 values");
  require_positive(values, "daily_returns");
  std::vector<double> out(values.size() - 1);
  for (std::size_t i = 1; i < values.size(); ++i) out[i - 1] = values[i] / values[i - 1] - 1.0;
  return out;
}

double max_drawdown(std::span<const double> values) {
  require_positive(values, "max_drawdown");
  double peak = 0.0;
  double worst = 0.0;
  for (double v : values) {
    peak = std::max(peak, v);
    worst = std::max(worst, (peak - v) / peak);
  }
  return worst;
}

double sharpe_annual(std::span<const double> returns, double rf_daily,
                     std::size_t trading_days) {
  if (returns.size() < 2) throw Error(ErrorKind::TooShort, "sharpe: need >= 2 returns");
  const double m = mean(returns);
  const double s = std_pop(returns);
  if (is_zero_volatility(m, s)) {
    throw Error(ErrorKind::ZeroVolatility, "sharpe: return series has zero volatility");
  }
  return (m - rf_daily) / s * std::sqrt(static_cast<double>(trading_days));
}

double information_ratio_annual(std::span<const double> returns,
                                std::span<const double> benchmark, std::size_t trading_days) {
  if (returns.size() != benchmark.size()) {
    throw Error(ErrorKind::LengthMismatch,
                fmt::format("information ratio: {} returns vs {} benchmark returns",
                            returns.size(), benchmark.size()));
  }
  std::vector<double> diff(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) diff[i] = returns[i] - benchmark[i];
  return sharpe_annual(diff, 0.0, trading_days);
}

double volatility_annual(std::span<const double> returns, std::size_t trading_days) {
  return std_pop(returns) * std::sqrt(static_cast<double>(trading_days));
}

std::vector<double> yearly_rr(std::span<const double> equity, double initial_price,
                              std::span<const IndexRange> ranges) {
  std::vector<double> out;
  out.reserve(ranges.size());
  double start = initial_price;
  for (const IndexRange& r : ranges) {
    if (r.end == 0 || r.end > equity.size() || r.begin >= r.end) {
      throw Error(ErrorKind::IndexOutOfRange, "yearly_rr: range outside the equity curve");
    }
    const double end = equity[r.end - 1];
    out.push_back(end / start);
    start = end;
  }
  return out;
}

GaussianFit gaussian_fit(std::span<const double> returns) {
  if (returns.size() < 2) throw Error(ErrorKind::TooShort, "gaussian_fit: need >= 2 returns");
  return {mean(returns), std_pop(returns)};
}

MetricReport build_report(const ReportInputs& in) {
  if (in.equity.empty()) throw Error(ErrorKind::TooShort, "report: empty equity curve");
  if (in.benchmark.size() != in.equity.size()) {
    throw Error(ErrorKind::LengthMismatch, "report: benchmark and equity differ in length");
  }
  if (in.trading_days == 0) throw Error(ErrorKind::InvalidParams, "trading_days must be >= 1");
  require_positive(std::span<const double>(&in.initial_price, 1), "report initial price");

  MetricReport r;
  r.initial_price = in.initial_price;
  r.final_price = in.equity.back();
  r.rr_whole = r.final_price / r.initial_price;
  const double years =
      static_cast<double>(in.equity.size()) / static_cast<double>(in.trading_days);
  r.rr_per_year = std::pow(r.rr_whole, 1.0 / years);

  const auto ranges = slice_years(in.equity.size(), in.trading_days);
  r.rr_by_year = yearly_rr(in.equity, in.initial_price, ranges);
  const auto [lo, hi] = std::minmax_element(r.rr_by_year.begin(), r.rr_by_year.end());
  r.min_year_rr = *lo;
  r.max_year_rr = *hi;
  r.buy_count = in.buy_count;
  r.mdd = max_drawdown(in.equity);

  if (in.equity.size() >= 2) {
    const auto returns = daily_returns(in.equity);
    const auto bench = daily_returns(in.benchmark);
    r.vol_annual = volatility_annual(returns, in.trading_days);
    if (returns.size() >= 2) {
      const GaussianFit fit = gaussian_fit(returns);
      r.return_fit_mean = fit.mean;
      r.return_fit_std = fit.std;
      try {
        r.sharpe_annual = sharpe_annual(returns, 0.0, in.trading_days);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroVolatility) throw;
      }
      try {
        r.ir_annual = information_ratio_annual(returns, bench, in.trading_days);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroVolatility) throw;
      }
    } else {
      r.return_fit_mean = returns.front();
    }
  }
  return r;
}

} // namespace qstrat
