#include "qstrat/market_data.hpp"

#include "qstrat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace qstrat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::string normalize_header(std::string_view name) {
  std::string out;
  for (char c : trim(name)) {
    if (c == ' ' || c == '-') {
      out.push_back('_');
    } else {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::optional<std::uint64_t> parse_volume(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec == std::errc{} && ptr == end) return value;
  // Some exports write integral volumes as "1234.0".
  const auto real = parse_double(text);
  if (real && std::isfinite(*real) && *real >= 0.0 && std::floor(*real) == *real &&
      *real < 1.8e19) {
    return static_cast<std::uint64_t>(*real);
  }
  return std::nullopt;
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

struct Columns {
  std::size_t date, open, high, low, close, volume;
  std::optional<std::size_t> adj_close;
};

Columns locate_columns(std::string_view header_line) {
  const auto names = split_fields(header_line);
  auto find = [&](std::string_view wanted) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (normalize_header(names[i]) == wanted) return i;
    }
    return std::nullopt;
  };
  auto require = [&](std::string_view wanted) {
    const auto idx = find(wanted);
    if (!idx) {
      throw Error(ErrorKind::MissingColumn, fmt::format("missing column '{}'", wanted));
    }
    return *idx;
  };
  Columns cols{require("date"), require("open"), require("high"),
               require("low"),  require("close"), require("volume"),
               find("adj_close")};
  return cols;
}

} // namespace

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  auto num = [&](std::size_t pos, std::size_t len, auto& out) {
    const auto* first = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
  };
  if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return std::nullopt;
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(Date date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

OhlcvSeries::OhlcvSeries(std::string symbol, std::vector<Bar> bars)
    : symbol_(std::move(symbol)), bars_(std::move(bars)) {
  if (bars_.empty()) throw Error(ErrorKind::EmptySeries, "series has no bars");
  closes_.reserve(bars_.size());
  highs_.reserve(bars_.size());
  lows_.reserve(bars_.size());
  for (std::size_t i = 0; i < bars_.size(); ++i) {
    const Bar& b = bars_[i];
    if (!positive_finite(b.open) || !positive_finite(b.high) || !positive_finite(b.low) ||
        !positive_finite(b.close)) {
      throw Error(ErrorKind::InvariantViolation,
                  fmt::format("bar {} has a non-positive or non-finite price", i + 1), i + 1);
    }
    if (b.low > b.high) {
      throw Error(ErrorKind::InvariantViolation, fmt::format("bar {} has low > high", i + 1),
                  i + 1);
    }
    if (i > 0 && !(bars_[i - 1].date < b.date)) {
      throw Error(ErrorKind::NonMonotonicDates,
                  fmt::format("bar {} is not after its predecessor", i + 1), i + 1);
    }
    closes_.push_back(b.close);
    highs_.push_back(b.high);
    lows_.push_back(b.low);
  }
}

ParseResult parse_csv(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingInput, fmt::format("cannot open '{}'", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv_text(buffer.str(), path.stem().string(), options);
}

ParseResult parse_csv_text(std::string_view text, std::string symbol,
                           const ParseOptions& options) {
  const bool strict = options.mode == ParseMode::Strict;

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) lines.push_back(line);
    pos = nl + 1;
  }
  // Skip a UTF-8 byte order mark on the header.
  if (!lines.empty() && lines.front().substr(0, 3) == "\xEF\xBB\xBF") {
    lines.front().remove_prefix(3);
  }
  if (lines.empty()) throw Error(ErrorKind::MissingColumn, "missing header row");

  const Columns cols = locate_columns(lines.front());
  const std::size_t min_fields =
      std::max({cols.date, cols.open, cols.high, cols.low, cols.close, cols.volume,
                cols.adj_close.value_or(0)}) + 1;

  std::vector<Bar> bars;
  bars.reserve(lines.size() - 1);
  std::size_t warnings = 0;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t row = li;
    const auto fields = split_fields(lines[li]);
    if (fields.size() < min_fields) {
      throw Error(ErrorKind::UnparsableRow, fmt::format("row {}: too few fields", row), row);
    }

    const std::array<std::string_view, 4> price_cells{fields[cols.open], fields[cols.high],
                                                      fields[cols.low], fields[cols.close]};
    if (std::all_of(price_cells.begin(), price_cells.end(),
                    [](std::string_view s) { return s.empty(); })) {
      throw Error(ErrorKind::UnparsableRow, fmt::format("row {}: all price cells empty", row),
                  row);
    }

    const auto date = parse_date(fields[cols.date]);
    const auto open = parse_double(fields[cols.open]);
    const auto high = parse_double(fields[cols.high]);
    const auto low = parse_double(fields[cols.low]);
    auto close = parse_double(fields[cols.close]);
    const auto volume = parse_volume(fields[cols.volume]);
    if (!date || !open || !high || !low || !close || !volume) {
      throw Error(ErrorKind::UnparsableRow, fmt::format("row {}: unparsable field", row), row);
    }
    if (options.use_adjusted && cols.adj_close) {
      close = parse_double(fields[*cols.adj_close]);
      if (!close) {
        throw Error(ErrorKind::UnparsableRow, fmt::format("row {}: unparsable adj_close", row),
                    row);
      }
    }

    Bar bar{*date, *open, *high, *low, *close, *volume};
    if (!positive_finite(bar.open) || !positive_finite(bar.high) || !positive_finite(bar.low) ||
        !positive_finite(bar.close)) {
      throw Error(ErrorKind::InvariantViolation,
                  fmt::format("row {}: prices must be finite and positive", row), row);
    }
    if (bar.low > bar.high) {
      if (strict) {
        throw Error(ErrorKind::InvariantViolation, fmt::format("row {}: low > high", row), row);
      }
      std::swap(bar.low, bar.high);
      ++warnings;
    }
    auto contain = [&](double& field, std::string_view name) {
      if (field >= bar.low && field <= bar.high) return;
      if (strict) {
        throw Error(ErrorKind::InvariantViolation,
                    fmt::format("row {}: {} outside [low, high]", row, name), row);
      }
      field = std::clamp(field, bar.low, bar.high);
      ++warnings;
    };
    contain(bar.open, "open");
    contain(bar.close, "close");
    bars.push_back(bar);
  }

  if (bars.empty()) throw Error(ErrorKind::EmptySeries, "no data rows");

  // Accept either strictly ascending or strictly descending files; the
  // direction is fixed by the first pair of rows.
  if (bars.size() >= 2) {
    const bool descending = bars[1].date < bars[0].date;
    for (std::size_t i = 1; i < bars.size(); ++i) {
      const bool ok = descending ? bars[i].date < bars[i - 1].date
                                 : bars[i - 1].date < bars[i].date;
      if (!ok) {
        throw Error(ErrorKind::NonMonotonicDates,
                    fmt::format("row {}: dates are not strictly monotonic", i + 1), i + 1);
      }
    }
    if (descending) std::reverse(bars.begin(), bars.end());
  }

  return ParseResult{OhlcvSeries(std::move(symbol), std::move(bars)), warnings};
}

std::string to_csv(const OhlcvSeries& series) {
  std::string out = "date,open,high,low,close,volume\n";
  for (const Bar& b : series.bars()) {
    out += fmt::format("{},{},{},{},{},{}\n", format_date(b.date), b.open, b.high, b.low,
                       b.close, b.volume);
  }
  return out;
}

std::vector<IndexRange> slice_years(std::size_t length, std::size_t bars_per_year) {
  if (bars_per_year == 0) throw Error(ErrorKind::InvalidParams, "bars_per_year must be >= 1");
  std::vector<IndexRange> ranges;
  for (std::size_t begin = 0; begin < length; begin += bars_per_year) {
    ranges.push_back({begin, std::min(length, begin + bars_per_year)});
  }
  return ranges;
}

std::vector<IndexRange> slice_years(const OhlcvSeries& series, std::size_t bars_per_year) {
  return slice_years(series.size(), bars_per_year);
}

} // namespace qstrat
