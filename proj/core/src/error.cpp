#include "riesz/error.hpp"

namespace riesz {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorKind::TargetUnreachable: return "TargetUnreachable";
    case ErrorKind::UnsupportedVariant: return "UnsupportedVariant";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::NoTransition: return "NoTransition";
    case ErrorKind::OracleUnavailable: return "OracleUnavailable";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace riesz
