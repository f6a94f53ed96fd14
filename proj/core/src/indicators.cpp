#include "qstrat/indicators.hpp"

#include "qstrat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace qstrat {

namespace {

// Neumaier-compensated running sum; supports removal by adding the negation.
class CompensatedSum {
public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_period(std::size_t n, std::string_view what) {
  if (n == 0) throw Error(ErrorKind::ZeroPeriod, fmt::format("{}: period must be >= 1", what));
}

void require_nonempty(std::span<const double> input, std::string_view what) {
  if (input.empty()) throw Error(ErrorKind::TooShort, fmt::format("{}: empty input", what));
}

void require_multiplier(double mult, std::string_view what) {
  if (!std::isfinite(mult) || mult < 0.0) {
    throw Error(ErrorKind::InvalidParams,
                fmt::format("{}: width multiplier must be finite and >= 0", what));
  }
}

// Mean of input[first..=last], anchored on the last element so a window of
// identical values reproduces that value exactly.
double window_mean(std::span<const double> input, std::size_t first, std::size_t last) {
  const double anchor = input[last];
  double acc = 0.0;
  for (std::size_t k = first; k <= last; ++k) acc += input[k] - anchor;
  return anchor + acc / static_cast<double>(last - first + 1);
}

// Population standard deviation of every trailing n-window; zero during warm-up.
std::vector<double> rolling_std_pop(std::span<const double> input, std::size_t n) {
  std::vector<double> out(input.size(), 0.0);
  for (std::size_t i = n - 1; i < input.size(); ++i) {
    const std::size_t first = i + 1 - n;
    const double mean = window_mean(input, first, i);
    double ss = 0.0;
    for (std::size_t k = first; k <= i; ++k) {
      const double d = input[k] - mean;
      ss += d * d;
    }
    out[i] = std::sqrt(ss / static_cast<double>(n));
  }
  return out;
}

BandSet offset_bands(IndicatorSeries middle, std::span<const double> width, double mult,
                     std::size_t warmup) {
  BandSet bands;
  const std::size_t len = middle.size();
  bands.upper.values.resize(len);
  bands.lower.values.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double offset = mult * width[i];
    bands.upper.values[i] = middle.values[i] + offset;
    bands.lower.values[i] = middle.values[i] - offset;
  }
  middle.warmup_len = std::max(middle.warmup_len, warmup);
  bands.upper.warmup_len = middle.warmup_len;
  bands.lower.warmup_len = middle.warmup_len;
  bands.middle = std::move(middle);
  return bands;
}

} // namespace

void AmaParams::validate() const {
  if (timeperiod_short < 1 || timeperiod_long <= timeperiod_short) {
    throw Error(ErrorKind::InvalidParams,
                fmt::format("ama: need timeperiod_long > timeperiod_short >= 1 (got {}, {})",
                            timeperiod_long, timeperiod_short));
  }
  if (ada_win < 1) throw Error(ErrorKind::InvalidParams, "ama: ada_win must be >= 1");
  if (matype != AmaType::Ema && matype != AmaType::Sma) {
    throw Error(ErrorKind::InvalidParams, "ama: matype must be 1 or 2");
  }
}

std::size_t ma_period(const MaSpec& spec) noexcept {
  if (const auto* plain = std::get_if<PlainMa>(&spec)) return plain->period;
  return std::get<AmaParams>(spec).timeperiod_long;
}

std::size_t ma_warmup(const MaSpec& spec) noexcept {
  if (const auto* plain = std::get_if<PlainMa>(&spec)) {
    return plain->period == 0 ? 0 : plain->period - 1;
  }
  const auto& p = std::get<AmaParams>(spec);
  return p.matype == AmaType::Sma ? p.timeperiod_long : p.ada_win;
}

void validate(const MaSpec& spec) {
  if (const auto* plain = std::get_if<PlainMa>(&spec)) {
    require_period(plain->period, "moving average");
    return;
  }
  std::get<AmaParams>(spec).validate();
}

IndicatorSeries sma(std::span<const double> input, std::size_t n) {
  require_period(n, "sma");
  require_nonempty(input, "sma");
  IndicatorSeries out;
  out.values.assign(input.begin(), input.end());
  out.warmup_len = std::min(n - 1, input.size());
  if (n == 1) return out;

  // Sum deviations from a fixed anchor: a constant series then sums exact
  // zeros and maps onto itself.
  const double anchor = input[0];
  const double inv_n = 1.0 / static_cast<double>(n);
  CompensatedSum window;
  for (std::size_t i = 0; i < input.size(); ++i) {
    window.add(input[i] - anchor);
    if (i >= n) window.add(-(input[i - n] - anchor));
    if (i + 1 >= n) out.values[i] = anchor + window.value() * inv_n;
  }
  return out;
}

IndicatorSeries ema(std::span<const double> input, std::size_t n, double smoothing) {
  require_period(n, "ema");
  require_nonempty(input, "ema");
  if (!std::isfinite(smoothing) || smoothing <= 0.0) {
    throw Error(ErrorKind::InvalidParams, "ema: smoothing factor must be > 0");
  }
  IndicatorSeries out;
  out.values.assign(input.begin(), input.end());
  out.warmup_len = std::min(n - 1, input.size());
  const double k = smoothing / static_cast<double>(n + 1);
  if (k >= 1.0) return out;
  for (std::size_t i = 1; i < input.size(); ++i) {
    const double prev = out.values[i - 1];
    out.values[i] = prev + k * (input[i] - prev);
  }
  return out;
}

IndicatorSeries efficiency_ratio(std::span<const double> input, std::size_t m) {
  require_period(m, "efficiency_ratio");
  IndicatorSeries out;
  out.values.assign(input.size(), 0.0);
  out.warmup_len = std::min(m, input.size());
  CompensatedSum noise;
  for (std::size_t i = 1; i < input.size(); ++i) {
    noise.add(std::abs(input[i] - input[i - 1]));
    if (i > m) noise.add(-std::abs(input[i - m] - input[i - m - 1]));
    if (i < m) continue;
    const double signal = input[i] - input[i - m];
    const double denom = std::max(noise.value(), kEfficiencyNoiseFloor);
    out.values[i] = std::clamp(signal / denom, -1.0, 1.0);
  }
  return out;
}

namespace {

std::size_t effective_period(double abs_er, const AmaParams& p) {
  const double span = static_cast<double>(p.timeperiod_long - p.timeperiod_short);
  const double period = static_cast<double>(p.timeperiod_short) + abs_er * span;
  const auto truncated = static_cast<std::size_t>(period);
  return std::clamp<std::size_t>(truncated, 1, p.timeperiod_long);
}

} // namespace

IndicatorSeries ama(std::span<const double> input, const AmaParams& params) {
  params.validate();
  require_nonempty(input, "ama");
  const IndicatorSeries er = efficiency_ratio(input, params.ada_win);

  IndicatorSeries out;
  out.values.assign(input.begin(), input.end());

  if (params.matype == AmaType::Ema) {
    out.warmup_len = std::min(params.ada_win, input.size());
    const double slow_sc = 2.0 / static_cast<double>(params.timeperiod_long + 1);
    const double fast_sc = 2.0 / static_cast<double>(params.timeperiod_short + 1);
    const double diff_sc = fast_sc - slow_sc;
    for (std::size_t i = 1; i < input.size(); ++i) {
      const double ssc = slow_sc + std::abs(er[i]) * diff_sc;
      const double prev = out.values[i - 1];
      out.values[i] = prev + ssc * ssc * (input[i] - prev);
    }
    return out;
  }

  // The window spans period + 1 bars ending at i.
  out.warmup_len = std::min(params.timeperiod_long, input.size());
  for (std::size_t i = params.timeperiod_long; i < input.size(); ++i) {
    const std::size_t period = effective_period(std::abs(er[i]), params);
    out.values[i] = window_mean(input, i - period, i);
  }
  return out;
}

std::vector<std::size_t> ama_effective_periods(std::span<const double> input,
                                               const AmaParams& params) {
  params.validate();
  const IndicatorSeries er = efficiency_ratio(input, params.ada_win);
  std::vector<std::size_t> periods(input.size(), 0);
  for (std::size_t i = params.timeperiod_long; i < input.size(); ++i) {
    periods[i] = effective_period(std::abs(er[i]), params);
  }
  return periods;
}

IndicatorSeries moving_average(std::span<const double> input, const MaSpec& spec) {
  if (const auto* plain = std::get_if<PlainMa>(&spec)) {
    return plain->kind == MaKind::Sma ? sma(input, plain->period) : ema(input, plain->period);
  }
  return ama(input, std::get<AmaParams>(spec));
}

std::vector<double> typical_price(const OhlcvSeries& series) {
  std::vector<double> tp(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Bar& b = series[i];
    tp[i] = b.close + ((b.high - b.close) + (b.low - b.close)) / 3.0;
  }
  return tp;
}

IndicatorSeries true_range(const OhlcvSeries& series) {
  IndicatorSeries out;
  out.values.resize(series.size());
  out.values[0] = series[0].high - series[0].low;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const Bar& b = series[i];
    const double prev_close = series[i - 1].close;
    out.values[i] = std::max({b.high - b.low, b.high - prev_close, prev_close - b.low});
  }
  return out;
}

IndicatorSeries atr(const OhlcvSeries& series, std::size_t n) {
  require_period(n, "atr");
  return sma(true_range(series).values, n);
}

BandSet keltner(const OhlcvSeries& series, const MaSpec& spec, double mult) {
  validate(spec);
  require_multiplier(mult, "keltner");
  const auto tp = typical_price(series);
  IndicatorSeries middle = moving_average(tp, spec);
  const IndicatorSeries range = atr(series, ma_period(spec));
  return offset_bands(std::move(middle), range.values, mult, range.warmup_len);
}

IndicatorSeries rsi(std::span<const double> closes, std::size_t n) {
  require_period(n, "rsi");
  if (closes.size() < 2) throw Error(ErrorKind::TooShort, "rsi: need at least 2 closes");
  IndicatorSeries out;
  out.values.assign(closes.size(), 50.0);
  out.warmup_len = std::min(n + 1, closes.size());
  if (closes.size() <= n + 1) return out;

  const double periods = static_cast<double>(n);
  double upavg = 0.0;
  double dnavg = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (closes[i] > closes[i - 1]) {
      upavg += closes[i] - closes[i - 1];
    } else {
      dnavg += closes[i - 1] - closes[i];
    }
  }
  upavg /= periods;
  dnavg /= periods;

  for (std::size_t i = n + 1; i < closes.size(); ++i) {
    double up = 0.0;
    double dn = 0.0;
    if (closes[i] > closes[i - 1]) {
      up = closes[i] - closes[i - 1];
    } else {
      dn = closes[i - 1] - closes[i];
    }
    upavg = (upavg * (periods - 1.0) + up) / periods;
    dnavg = (dnavg * (periods - 1.0) + dn) / periods;
    const double total = upavg + dnavg;
    out.values[i] = total == 0.0 ? 50.0 : 100.0 * (upavg / total);
  }
  return out;
}

IndicatorSeries rmi(std::span<const double> closes, std::size_t n, std::size_t m) {
  require_period(n, "rmi");
  require_period(m, "rmi look-back");
  if (closes.size() <= m) {
    throw Error(ErrorKind::TooShort, fmt::format("rmi: need more than {} closes", m));
  }
  IndicatorSeries out;
  out.values.assign(closes.size(), 50.0);
  out.warmup_len = std::min(m + n, closes.size());
  if (closes.size() <= m + n) return out;

  const double periods = static_cast<double>(n);
  double upavg = 0.0;
  double dnavg = 0.0;
  for (std::size_t i = m; i < m + n; ++i) {
    if (closes[i] > closes[i - m]) {
      upavg += closes[i] - closes[i - m];
    } else {
      dnavg += closes[i - m] - closes[i];
    }
  }
  upavg /= periods;
  dnavg /= periods;

  for (std::size_t i = m + n; i < closes.size(); ++i) {
    double up = 0.0;
    double dn = 0.0;
    if (closes[i] > closes[i - m]) {
      up = closes[i] - closes[i - m];
    } else {
      dn = closes[i - m] - closes[i];
    }
    upavg = (upavg * (periods - 1.0) + up) / periods;
    dnavg = (dnavg * (periods - 1.0) + dn) / periods;
    const double total = upavg + dnavg;
    out.values[i] = total == 0.0 ? 50.0 : 100.0 * (upavg / total);
  }
  return out;
}

AroonLines aroon(std::span<const double> highs, std::span<const double> lows, std::size_t n) {
  require_period(n, "aroon");
  if (highs.size() != lows.size()) {
    throw Error(ErrorKind::LengthMismatch, "aroon: highs and lows differ in length");
  }
  if (highs.size() <= n) {
    throw Error(ErrorKind::TooShort, fmt::format("aroon: need more than {} bars", n));
  }
  const std::size_t len = highs.size();
  AroonLines out;
  out.up.values.resize(len);
  out.down.values.resize(len);
  out.osc.values.resize(len);
  out.up.warmup_len = out.down.warmup_len = out.osc.warmup_len = n;

  const double periods = static_cast<double>(n);
  // 100 * (n - age) is exact, so the single rounding in the division keeps
  // the value inside [0, 100].
  const auto score = [&](std::size_t age) {
    return 100.0 * static_cast<double>(n - age) / periods;
  };
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t first = i >= n ? i - n : 0;
    // Scan newest to oldest with strict comparisons so ties keep the most
    // recent extreme.
    std::size_t hi_at = i;
    std::size_t lo_at = i;
    for (std::size_t k = i; k-- > first;) {
      if (highs[k] > highs[hi_at]) hi_at = k;
      if (lows[k] < lows[lo_at]) lo_at = k;
    }
    out.up.values[i] = score(i - hi_at);
    out.down.values[i] = score(i - lo_at);
    out.osc.values[i] = out.up.values[i] - out.down.values[i];
  }
  return out;
}

AroonLines aroon(const OhlcvSeries& series, std::size_t n) {
  return aroon(series.highs(), series.lows(), n);
}

BandSet bollinger(const OhlcvSeries& series, std::size_t n, double dev) {
  return bollinger(series, MaSpec{PlainMa{MaKind::Sma, n}}, dev);
}

BandSet bollinger(const OhlcvSeries& series, const MaSpec& spec, double dev) {
  validate(spec);
  require_multiplier(dev, "bollinger");
  const auto tp = typical_price(series);
  const std::size_t window = ma_period(spec);
  IndicatorSeries middle = moving_average(tp, spec);
  const auto sigma = rolling_std_pop(tp, window);
  return offset_bands(std::move(middle), sigma, dev, std::min(window - 1, tp.size()));
}

MacdLines macd(std::span<const double> closes, std::size_t short_n, std::size_t long_n,
               std::size_t signal_n) {
  require_period(short_n, "macd short");
  require_period(long_n, "macd long");
  require_period(signal_n, "macd signal");
  require_nonempty(closes, "macd");
  const IndicatorSeries fast = ema(closes, short_n);
  const IndicatorSeries slow = ema(closes, long_n);

  MacdLines out;
  out.macd.values.resize(closes.size());
  for (std::size_t i = 0; i < closes.size(); ++i) {
    out.macd.values[i] = fast.values[i] - slow.values[i];
  }
  out.macd.warmup_len = std::max(fast.warmup_len, slow.warmup_len);
  out.signal = sma(out.macd.values, signal_n);
  out.signal.warmup_len = std::min(out.macd.warmup_len + signal_n - 1, closes.size());
  out.hist.values.resize(closes.size());
  for (std::size_t i = 0; i < closes.size(); ++i) {
    out.hist.values[i] = out.macd.values[i] - out.signal.values[i];
  }
  out.hist.warmup_len = out.signal.warmup_len;
  return out;
}

} // namespace qstrat
