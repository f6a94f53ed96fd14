#pragma once

#include "qstrat/indicators.hpp"
#include "qstrat/market_data.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace qstrat {

enum class Action { Buy, Sell };

std::string_view to_string(Action action) noexcept;

struct SignalEvent {
  std::size_t bar_index = 0;
  Action action = Action::Buy;

  bool operator==(const SignalEvent&) const = default;
};

using SignalList = std::vector<SignalEvent>;

/// Throws IndexOutOfRange when an event lies outside [0, series_len) and
/// NonAlternatingSignals unless events are strictly increasing in bar index,
/// start with Buy and alternate.
void validate_signals(std::span<const SignalEvent> signals, std::size_t series_len);

namespace strategy {

/// Golden/dead cross of two moving averages.
struct TwoAverage {
  MaSpec fast = PlainMa{MaKind::Sma, 5};
  MaSpec slow = PlainMa{MaKind::Sma, 20};
};

/// Close crossing a single moving average.
struct PriceCross {
  MaSpec ma = PlainMa{MaKind::Sma, 20};
};

/// Breakout: buy above the upper band, sell below the lower band.
struct Keltner {
  MaSpec ma = PlainMa{MaKind::Sma, 20};
  double mult = 2.0;
};

/// Overbought/oversold RSI with an end-of-trend rate gate. rsitype 2 adds
/// the close-versus-SMA band gate.
struct Rsi {
  std::size_t n = 14;
  double down_thres = 30.0;
  double upper_thres = 70.0;
  double diff_rate = 0.0024;
  int rsitype = 1;
  std::size_t sma_n = 20;
  double sma_rate = 0.001;
};

/// Aroon up/down crossover; aroon_type 2 requires the opposing line to be
/// below `weak_thres` at the cross.
struct Aroon {
  std::size_t n = 25;
  int aroon_type = 1;
  double weak_thres = 45.0;
};

/// Mean reversion: buy on a cross below the lower band, sell on a cross
/// above the upper band.
struct Bollinger {
  MaSpec ma = PlainMa{MaKind::Sma, 20};
  double dev = 2.0;
};

struct Macd {
  std::size_t short_n = 12;
  std::size_t long_n = 26;
  std::size_t signal_n = 9;
};

/// Single Buy on the first bar; the reference every other strategy is
/// measured against.
struct BuyAndHold {};

} // namespace strategy

using StrategyConfig =
    std::variant<strategy::TwoAverage, strategy::PriceCross, strategy::Keltner, strategy::Rsi,
                 strategy::Aroon, strategy::Bollinger, strategy::Macd, strategy::BuyAndHold>;

std::string_view strategy_name(const StrategyConfig& config) noexcept;

/// Throws InvalidParams (or ZeroPeriod) for out-of-range parameters.
void validate(const StrategyConfig& config);

/// First bar index at which the strategy may emit a signal.
std::size_t scan_start(const StrategyConfig& config) noexcept;

/// RSI and Aroon evaluate bars [60, len - 1) regardless of their periods.
inline constexpr std::size_t kListingScanStart = 60;

SignalList two_average_signals(const OhlcvSeries& series, const strategy::TwoAverage& cfg);
SignalList price_cross_signals(const OhlcvSeries& series, const strategy::PriceCross& cfg);
SignalList keltner_signals(const OhlcvSeries& series, const strategy::Keltner& cfg);
SignalList rsi_signals(const OhlcvSeries& series, const strategy::Rsi& cfg);
SignalList aroon_signals(const OhlcvSeries& series, const strategy::Aroon& cfg);
SignalList bollinger_signals(const OhlcvSeries& series, const strategy::Bollinger& cfg);
SignalList macd_signals(const OhlcvSeries& series, const strategy::Macd& cfg);

SignalList generate_signals(const OhlcvSeries& series, const StrategyConfig& config);

} // namespace qstrat
