#include "plateau/error.hpp"

namespace plateau {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ContainmentViolation: return "ContainmentViolation";
    case ErrorKind::BadCurveSpec: return "BadCurveSpec";
    case ErrorKind::CurvesIntersect: return "CurvesIntersect";
    case ErrorKind::RingMismatch: return "RingMismatch";
    case ErrorKind::OutsideC0: return "OutsideC0";
    case ErrorKind::NonConformingSpacing: return "NonConformingSpacing";
    case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::SheetOutsideGrid: return "SheetOutsideGrid";
    case ErrorKind::LambdaViolation: return "LambdaViolation";
    case ErrorKind::BadSequence: return "BadSequence";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace plateau
