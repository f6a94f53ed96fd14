#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qstrat {

using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`. Returns nullopt for anything else, including
/// well-formed strings naming a day that does not exist.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

struct Bar {
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  std::uint64_t volume = 0;

  bool operator==(const Bar&) const = default;
};

/// An immutable, validated daily bar series. Construction enforces a
/// non-empty series, strictly increasing dates, finite positive prices and
/// low <= high. Open/close containment in [low, high] is a parser concern
/// (strict vs lenient), so it is not re-checked here.
class OhlcvSeries {
public:
  OhlcvSeries(std::string symbol, std::vector<Bar> bars);

  const std::string& symbol() const noexcept { return symbol_; }
  std::span<const Bar> bars() const noexcept { return bars_; }
  std::size_t size() const noexcept { return bars_.size(); }
  const Bar& operator[](std::size_t i) const { return bars_[i]; }

  std::span<const double> closes() const noexcept { return closes_; }
  std::span<const double> highs() const noexcept { return highs_; }
  std::span<const double> lows() const noexcept { return lows_; }

  bool operator==(const OhlcvSeries& other) const {
    return symbol_ == other.symbol_ && bars_ == other.bars_;
  }

private:
  std::string symbol_;
  std::vector<Bar> bars_;
  std::vector<double> closes_;
  std::vector<double> highs_;
  std::vector<double> lows_;
};

enum class ParseMode { Strict, Lenient };

struct ParseOptions {
  ParseMode mode = ParseMode::Strict;
  /// Replace `close` with the `adj_close` column when present.
  bool use_adjusted = false;
};

struct ParseResult {
  OhlcvSeries series;
  std::size_t warnings = 0;
};

ParseResult parse_csv(const std::filesystem::path& path, const ParseOptions& options = {});

/// Parses CSV text. `symbol` names the resulting series.
ParseResult parse_csv_text(std::string_view text, std::string symbol,
                           const ParseOptions& options = {});

/// Canonical `date,open,high,low,close,volume` text with shortest
/// round-trip number formatting, so parse_csv_text(to_csv(s)) == s.
std::string to_csv(const OhlcvSeries& series);

/// Half-open bar index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool operator==(const IndexRange&) const = default;
};

/// Consecutive blocks of `bars_per_year` bars; the last block holds the
/// remainder. Throws InvalidParams when bars_per_year is zero.
std::vector<IndexRange> slice_years(std::size_t length, std::size_t bars_per_year);
std::vector<IndexRange> slice_years(const OhlcvSeries& series, std::size_t bars_per_year);

} // namespace qstrat
