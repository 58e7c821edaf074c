#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace riesz {

enum class ErrorKind {
  InvalidArgument,
  NonFiniteCoordinate,
  DuplicatePoints,
  TooFewPoints,
  DimensionMismatch,
  SizeCapExceeded,
  TargetUnreachable,
  UnsupportedVariant,
  UnsupportedDimension,
  HypothesisViolated,
  WindowTooSmall,
  NoTransition,
  OracleUnavailable,
  ParseError,
};

/// Stable name for an error kind; the CLI prints these verbatim.
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace riesz
