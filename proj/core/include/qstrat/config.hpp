#pragma once

#include "qstrat/strategies.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qstrat {

/// Flat view of a key-value tree file:
///
///     # comment
///     [strategy]
///     kind = two_average
///     fast.period = 5
///
/// Section headers prefix the keys that follow them ("strategy.fast.period").
/// Later assignments replace earlier ones.
class ConfigTree {
public:
  /// Throws InvalidConfig (with the 1-based line number) on malformed lines.
  static ConfigTree parse(std::string_view text);

  /// Throws MissingInput when the file cannot be read.
  static ConfigTree load(const std::filesystem::path& path);

  void set(std::string key, std::string value);

  /// Applies "key=value". Throws InvalidConfig when there is no '=' or the key
  /// is empty.
  void apply_override(std::string_view assignment);

  std::optional<std::string> get(std::string_view key) const;
  bool contains(std::string_view key) const;

  /// Keys that start with `prefix` followed by '.', in sorted order.
  std::vector<std::string> keys_under(std::string_view prefix) const;

  const std::map<std::string, std::string, std::less<>>& entries() const noexcept {
    return entries_;
  }

  bool operator==(const ConfigTree&) const = default;

private:
  std::map<std::string, std::string, std::less<>> entries_;
};

/// Strict numeric conversions for config values; throw InvalidConfig naming
/// `key` on failure.
std::size_t parse_count(std::string_view key, std::string_view value);
int parse_int(std::string_view key, std::string_view value);
double parse_real(std::string_view key, std::string_view value);

/// Builds the strategy described under "strategy.*". Throws InvalidConfig for
/// a missing or unknown kind, unknown keys and unparsable values; parameter
/// range checks are left to validate().
StrategyConfig strategy_from_config(const ConfigTree& tree);

/// Inverse of strategy_from_config: every parameter written explicitly.
ConfigTree strategy_to_config(const StrategyConfig& config);

} // namespace qstrat
