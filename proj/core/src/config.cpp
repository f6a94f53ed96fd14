#include "qstrat/config.hpp"

#include "qstrat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qstrat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

// Drops a trailing "# ..." comment that follows whitespace.
std::string_view strip_comment(std::string_view line) {
  for (std::size_t i = 1; i < line.size(); ++i) {
    if (line[i] == '#' && std::isspace(static_cast<unsigned char>(line[i - 1]))) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string_view unquote(std::string_view v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\''))) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view what) {
  throw Error(ErrorKind::InvalidConfig,
              fmt::format("config key '{}': '{}' is not {}", key, value, what));
}

class Reader {
public:
  explicit Reader(const ConfigTree& tree) : tree_(tree) {}

  std::optional<std::string> take(const std::string& key) {
    used_.insert(key);
    return tree_.get(key);
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    auto v = take(key);
    return v ? parse_count(key, *v) : fallback;
  }

  int integer(const std::string& key, int fallback) {
    auto v = take(key);
    return v ? parse_int(key, *v) : fallback;
  }

  double real(const std::string& key, double fallback) {
    auto v = take(key);
    return v ? parse_real(key, *v) : fallback;
  }

  void reject_unused(std::string_view prefix) const {
    for (const std::string& key : tree_.keys_under(prefix)) {
      if (!used_.contains(key)) {
        throw Error(ErrorKind::InvalidConfig, fmt::format("unknown config key '{}'", key));
      }
    }
  }

private:
  const ConfigTree& tree_;
  std::set<std::string> used_;
};

AmaType parse_matype(const std::string& key, const std::string& value) {
  if (value == "1" || value == "ema") return AmaType::Ema;
  if (value == "2" || value == "sma") return AmaType::Sma;
  bad_value(key, value, "an AMA type (1|ema|2|sma)");
}

MaSpec read_ma(Reader& r, const std::string& prefix, const MaSpec& fallback) {
  std::string type;
  if (auto t = r.take(prefix + ".type")) {
    type = *t;
  } else if (const auto* plain = std::get_if<PlainMa>(&fallback)) {
    type = plain->kind == MaKind::Sma ? "sma" : "ema";
  } else {
    type = "ama";
  }
  if (type == "sma" || type == "ema") {
    PlainMa ma;
    ma.kind = type == "sma" ? MaKind::Sma : MaKind::Ema;
    const auto* plain = std::get_if<PlainMa>(&fallback);
    ma.period = r.count(prefix + ".period", plain ? plain->period : ma.period);
    return ma;
  }
  if (type == "ama") {
    AmaParams p;
    if (const auto* a = std::get_if<AmaParams>(&fallback)) p = *a;
    p.timeperiod_long = r.count(prefix + ".long", p.timeperiod_long);
    p.timeperiod_short = r.count(prefix + ".short", p.timeperiod_short);
    p.ada_win = r.count(prefix + ".ada_win", p.ada_win);
    if (auto m = r.take(prefix + ".matype")) p.matype = parse_matype(prefix + ".matype", *m);
    return p;
  }
  bad_value(prefix + ".type", type, "a moving-average type (sma|ema|ama)");
}

void write_ma(ConfigTree& tree, const std::string& prefix, const MaSpec& spec) {
  if (const auto* plain = std::get_if<PlainMa>(&spec)) {
    tree.set(prefix + ".type", plain->kind == MaKind::Sma ? "sma" : "ema");
    tree.set(prefix + ".period", fmt::format("{}", plain->period));
    return;
  }
  const auto& a = std::get<AmaParams>(spec);
  tree.set(prefix + ".type", "ama");
  tree.set(prefix + ".long", fmt::format("{}", a.timeperiod_long));
  tree.set(prefix + ".short", fmt::format("{}", a.timeperiod_short));
  tree.set(prefix + ".ada_win", fmt::format("{}", a.ada_win));
  tree.set(prefix + ".matype", fmt::format("{}", static_cast<int>(a.matype)));
}

} // namespace

ConfigTree ConfigTree::parse(std::string_view text) {
  ConfigTree tree;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line_no == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.remove_prefix(3);
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    line = trim(strip_comment(line));
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorKind::InvalidConfig, "unterminated section header", line_no);
      }
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!name.empty() && !valid_key(name)) {
        throw Error(ErrorKind::InvalidConfig, fmt::format("invalid section name '{}'", name),
                    line_no);
      }
      section = std::string(name);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::InvalidConfig, fmt::format("expected 'key = value': '{}'", line),
                  line_no);
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (!valid_key(key)) {
      throw Error(ErrorKind::InvalidConfig, fmt::format("invalid key '{}'", key), line_no);
    }
    const std::string_view value = unquote(trim(line.substr(eq + 1)));
    tree.set(section.empty() ? std::string(key) : section + "." + std::string(key),
             std::string(value));
  }
  return tree;
}

ConfigTree ConfigTree::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingInput, fmt::format("cannot read config '{}'", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ConfigTree::set(std::string key, std::string value) {
  entries_.insert_or_assign(std::move(key), std::move(value));
}

void ConfigTree::apply_override(std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorKind::InvalidConfig,
                fmt::format("override '{}' is not of the form key=value", assignment));
  }
  const std::string_view key = trim(assignment.substr(0, eq));
  if (!valid_key(key)) {
    throw Error(ErrorKind::InvalidConfig, fmt::format("invalid override key '{}'", key));
  }
  set(std::string(key), std::string(unquote(trim(assignment.substr(eq + 1)))));
}

std::optional<std::string> ConfigTree::get(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool ConfigTree::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::vector<std::string> ConfigTree::keys_under(std::string_view prefix) const {
  const std::string lead = std::string(prefix) + ".";
  std::vector<std::string> out;
  for (auto it = entries_.lower_bound(lead); it != entries_.end() && it->first.starts_with(lead);
       ++it) {
    out.push_back(it->first);
  }
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc{} || ptr != end) bad_value(key, value, "a non-negative integer");
  return out;
}

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc{} || ptr != end) bad_value(key, value, "an integer");
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    bad_value(key, value, "a finite number");
  }
  return out;
}

StrategyConfig strategy_from_config(const ConfigTree& tree) {
  Reader r(tree);
  const auto kind = r.take("strategy.kind");
  if (!kind) throw Error(ErrorKind::InvalidConfig, "config is missing 'strategy.kind'");

  StrategyConfig out;
  if (*kind == "two_average") {
    strategy::TwoAverage c;
    c.fast = read_ma(r, "strategy.fast", c.fast);
    c.slow = read_ma(r, "strategy.slow", c.slow);
    out = c;
  } else if (*kind == "price_cross") {
    strategy::PriceCross c;
    c.ma = read_ma(r, "strategy.ma", c.ma);
    out = c;
  } else if (*kind == "keltner") {
    strategy::Keltner c;
    c.ma = read_ma(r, "strategy.ma", c.ma);
    c.mult = r.real("strategy.mult", c.mult);
    out = c;
  } else if (*kind == "rsi") {
    strategy::Rsi c;
    c.n = r.count("strategy.n", c.n);
    c.down_thres = r.real("strategy.down_thres", c.down_thres);
    c.upper_thres = r.real("strategy.upper_thres", c.upper_thres);
    c.diff_rate = r.real("strategy.diff_rate", c.diff_rate);
    c.rsitype = r.integer("strategy.rsitype", c.rsitype);
    c.sma_n = r.count("strategy.sma_n", c.sma_n);
    c.sma_rate = r.real("strategy.sma_rate", c.sma_rate);
    out = c;
  } else if (*kind == "aroon") {
    strategy::Aroon c;
    c.n = r.count("strategy.n", c.n);
    c.aroon_type = r.integer("strategy.aroon_type", c.aroon_type);
    c.weak_thres = r.real("strategy.weak_thres", c.weak_thres);
    out = c;
  } else if (*kind == "bollinger") {
    strategy::Bollinger c;
    c.ma = read_ma(r, "strategy.ma", c.ma);
    c.dev = r.real("strategy.dev", c.dev);
    out = c;
  } else if (*kind == "macd") {
    strategy::Macd c;
    c.short_n = r.count("strategy.short", c.short_n);
    c.long_n = r.count("strategy.long", c.long_n);
    c.signal_n = r.count("strategy.signal", c.signal_n);
    out = c;
  } else if (*kind == "buy_and_hold") {
    out = strategy::BuyAndHold{};
  } else {
    bad_value("strategy.kind", *kind, "a known strategy");
  }
  r.reject_unused("strategy");
  return out;
}

ConfigTree strategy_to_config(const StrategyConfig& config) {
  ConfigTree t;
  t.set("strategy.kind", std::string(strategy_name(config)));
  const auto num = [](auto v) { return fmt::format("{}", v); };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, strategy::TwoAverage>) {
          write_ma(t, "strategy.fast", c.fast);
          write_ma(t, "strategy.slow", c.slow);
        } else if constexpr (std::is_same_v<T, strategy::PriceCross>) {
          write_ma(t, "strategy.ma", c.ma);
        } else if constexpr (std::is_same_v<T, strategy::Keltner>) {
          write_ma(t, "strategy.ma", c.ma);
          t.set("strategy.mult", num(c.mult));
        } else if constexpr (std::is_same_v<T, strategy::Rsi>) {
          t.set("strategy.n", num(c.n));
          t.set("strategy.down_thres", num(c.down_thres));
          t.set("strategy.upper_thres", num(c.upper_thres));
          t.set("strategy.diff_rate", num(c.diff_rate));
          t.set("strategy.rsitype", num(c.rsitype));
          t.set("strategy.sma_n", num(c.sma_n));
          t.set("strategy.sma_rate", num(c.sma_rate));
        } else if constexpr (std::is_same_v<T, strategy::Aroon>) {
          t.set("strategy.n", num(c.n));
          t.set("strategy.aroon_type", num(c.aroon_type));
          t.set("strategy.weak_thres", num(c.weak_thres));
        } else if constexpr (std::is_same_v<T, strategy::Bollinger>) {
          write_ma(t, "strategy.ma", c.ma);
          t.set("strategy.dev", num(c.dev));
        } else if constexpr (std::is_same_v<T, strategy::Macd>) {
          t.set("strategy.short", num(c.short_n));
          t.set("strategy.long", num(c.long_n));
          t.set("strategy.signal", num(c.signal_n));
        }
      },
      config);
  return t;
}

} // namespace qstrat
