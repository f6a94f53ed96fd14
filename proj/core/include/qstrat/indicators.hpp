#pragma once

#include "qstrat/market_data.hpp"

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace qstrat {

/// Per-bar indicator output aligned 1:1 with its input. The first
/// `warmup_len` entries are pass-through or seed values rather than fully
/// formed outputs; they are always finite.
struct IndicatorSeries {
  std::vector<double> values;
  std::size_t warmup_len = 0;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> view() const noexcept { return values; }
};

enum class AmaType { Ema = 1, Sma = 2 };

/// Adaptive moving average parameters: the effective smoothing interpolates
/// between the long and short periods by the efficiency ratio measured over
/// `ada_win` bars.
struct AmaParams {
  std::size_t timeperiod_long = 30;
  std::size_t timeperiod_short = 2;
  std::size_t ada_win = 10;
  AmaType matype = AmaType::Ema;

  /// Throws InvalidParams unless long > short >= 1 and ada_win >= 1.
  void validate() const;
};

enum class MaKind { Sma, Ema };

struct PlainMa {
  MaKind kind = MaKind::Sma;
  std::size_t period = 20;
};

using MaSpec = std::variant<PlainMa, AmaParams>;

/// The window length a band built on this MA uses: the plain period, or the
/// long period for an adaptive MA.
std::size_t ma_period(const MaSpec& spec) noexcept;

/// Leading bars `moving_average(spec)` reports as warm-up.
std::size_t ma_warmup(const MaSpec& spec) noexcept;

void validate(const MaSpec& spec);

struct BandSet {
  IndicatorSeries middle;
  IndicatorSeries upper;
  IndicatorSeries lower;
};

struct AroonLines {
  IndicatorSeries up;
  IndicatorSeries down;
  IndicatorSeries osc;
};

struct MacdLines {
  IndicatorSeries macd;
  IndicatorSeries signal;
  IndicatorSeries hist;
};

/// Floor applied to the efficiency-ratio noise denominator.
inline constexpr double kEfficiencyNoiseFloor = 1e-4;

/// Mean of the trailing n inputs; entries before n-1 pass the input through.
IndicatorSeries sma(std::span<const double> input, std::size_t n);

/// out[i] = out[i-1] + K (in[i] - out[i-1]) with K = smoothing / (n + 1),
/// seeded with in[0]. K >= 1 degenerates to the input itself.
IndicatorSeries ema(std::span<const double> input, std::size_t n, double smoothing = 2.0);

/// Signed efficiency ratio in [-1, 1]; zero for the first m bars.
IndicatorSeries efficiency_ratio(std::span<const double> input, std::size_t m);

IndicatorSeries ama(std::span<const double> input, const AmaParams& params);

/// Integer window period the SMA-based AMA uses at each bar. Entries before
/// `timeperiod_long` are pass-through bars and hold 0.
std::vector<std::size_t> ama_effective_periods(std::span<const double> input,
                                               const AmaParams& params);

IndicatorSeries moving_average(std::span<const double> input, const MaSpec& spec);

/// (high + low + close) / 3, evaluated as close + ((high - close) + (low - close)) / 3
/// so a flat bar maps exactly onto its close.
std::vector<double> typical_price(const OhlcvSeries& series);

IndicatorSeries true_range(const OhlcvSeries& series);
IndicatorSeries atr(const OhlcvSeries& series, std::size_t n);

/// Keltner channel: MA of the typical price, offset by mult * ATR where the
/// ATR period equals ma_period(spec).
BandSet keltner(const OhlcvSeries& series, const MaSpec& spec, double mult = 2.0);

IndicatorSeries rsi(std::span<const double> closes, std::size_t n);

/// Relative momentum index: RSI structure with moves measured against the
/// close `m` bars back.
IndicatorSeries rmi(std::span<const double> closes, std::size_t n, std::size_t m);

AroonLines aroon(std::span<const double> highs, std::span<const double> lows, std::size_t n);
AroonLines aroon(const OhlcvSeries& series, std::size_t n);

/// Bollinger bands over the typical price with a population standard
/// deviation. The MA overload uses ma_period(spec) as the deviation window.
BandSet bollinger(const OhlcvSeries& series, std::size_t n, double dev = 2.0);
BandSet bollinger(const OhlcvSeries& series, const MaSpec& spec, double dev = 2.0);

MacdLines macd(std::span<const double> closes, std::size_t short_n = 12,
               std::size_t long_n = 26, std::size_t signal_n = 9);

} // namespace qstrat
