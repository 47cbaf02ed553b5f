#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plateau {

enum class ErrorKind {
  ContainmentViolation,
  BadCurveSpec,
  CurvesIntersect,
  RingMismatch,
  OutsideC0,
  NonConformingSpacing,
  ResolutionTooCoarse,
  NoConvergence,
  OutOfDomain,
  SheetOutsideGrid,
  LambdaViolation,
  BadSequence,
  HypothesisUnmet,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and the CLI
// exit path) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}
  // detail stays machine-readable (a field name, a line number); the
  // explanation only goes into what().
  Error(ErrorKind kind, const std::string& detail, const std::string& explanation)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail + ": " + explanation),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace plateau
