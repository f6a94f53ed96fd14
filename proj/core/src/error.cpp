#include "qstrat/error.hpp"

namespace qstrat {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::MissingInput: return "MissingInput";
  case ErrorKind::MissingColumn: return "MissingColumn";
  case ErrorKind::UnparsableRow: return "UnparsableRow";
  case ErrorKind::NonMonotonicDates: return "NonMonotonicDates";
  case ErrorKind::InvariantViolation: return "InvariantViolation";
  case ErrorKind::EmptySeries: return "EmptySeries";
  case ErrorKind::InvalidConfig: return "InvalidConfig";
  case ErrorKind::LengthMismatch: return "LengthMismatch";
  case ErrorKind::ZeroPeriod: return "ZeroPeriod";
  case ErrorKind::InvalidParams: return "InvalidParams";
  case ErrorKind::TooShort: return "TooShort";
  case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
  case ErrorKind::NonAlternatingSignals: return "NonAlternatingSignals";
  case ErrorKind::NonPositivePrice: return "NonPositivePrice";
  case ErrorKind::ZeroVolatility: return "ZeroVolatility";
  case ErrorKind::DomainError: return "DomainError";
  case ErrorKind::EmptyGridAfterFilter: return "EmptyGridAfterFilter";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::MissingInput:
  case ErrorKind::MissingColumn:
  case ErrorKind::UnparsableRow:
  case ErrorKind::NonMonotonicDates:
  case ErrorKind::InvariantViolation:
  case ErrorKind::EmptySeries:
  case ErrorKind::InvalidConfig:
  case ErrorKind::LengthMismatch:
    return true;
  default:
    return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> row)
    : std::runtime_error(message), kind_(kind), row_(row) {}

} // namespace qstrat
