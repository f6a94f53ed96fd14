#pragma once

#include "qstrat/error.hpp"

#include <gtest/gtest.h>

#include <optional>

namespace qstrat::testing {

/// Kind of the qstrat::Error thrown by fn; records a failure if none is.
template <class Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no qstrat::Error thrown";
  return ErrorKind::DomainError;
}

template <class Fn>
std::optional<std::size_t> row_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.row();
  }
  return std::nullopt;
}

} // namespace qstrat::testing
