#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scalarfield {

enum class ErrorKind {
  NotNegativeDefiniteAtZero,
  NoPositivePrimitive,
  SplitNotSubordinate,
  LambdaOutOfRange,
  BadResolution,
  ShapeMismatch,
  WrongSymmetryClass,
  BadRadius,
  GridTooSmall,
  NotFound,
  DilationCapExceeded,
  BadEndpoint,
  BadBase,
  NoDescent,
  BrokenPath,
  MonotonicityViolation,
  NoAdmissibleSeed,
  BelowThreshold,
  IterationCap,
  StiffnessFailure,
  NoBracket,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the named kinds so
/// callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace scalarfield
