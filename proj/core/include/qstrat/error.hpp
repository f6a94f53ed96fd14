#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qstrat {

enum class ErrorKind {
  // input errors (CLI exit code 2)
  MissingInput,
  MissingColumn,
  UnparsableRow,
  NonMonotonicDates,
  InvariantViolation,
  EmptySeries,
  InvalidConfig,
  LengthMismatch,
  // domain errors (CLI exit code 3)
  ZeroPeriod,
  InvalidParams,
  TooShort,
  IndexOutOfRange,
  NonAlternatingSignals,
  NonPositivePrice,
  ZeroVolatility,
  DomainError,
  EmptyGridAfterFilter,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for errors caused by the files or flags a caller supplied, as opposed
/// to a computation that is undefined for otherwise valid inputs.
bool is_input_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> row = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }

  /// 1-based data row (header excluded) for parse errors.
  std::optional<std::size_t> row() const noexcept { return row_; }

private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
};

} // namespace qstrat
