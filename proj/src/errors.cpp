#include "coaltypes/errors.hpp"

namespace coaltypes {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonfiniteMass: return "NonfiniteMass";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::SimplexViolation: return "SimplexViolation";
    case ErrorCode::DuplicateAtom: return "DuplicateAtom";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::DivergentRate: return "DivergentRate";
    case ErrorCode::TableTooLarge: return "TableTooLarge";
    case ErrorCode::RateTableTooSmall: return "RateTableTooSmall";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::UnsupportedMeasure: return "UnsupportedMeasure";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool is_validation_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonfiniteMass:
    case ErrorCode::NegativeWeight:
    case ErrorCode::InvalidParameter:
    case ErrorCode::SimplexViolation:
    case ErrorCode::DuplicateAtom:
    case ErrorCode::BadEpsilon:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::UnsupportedMeasure:
    case ErrorCode::TableTooLarge:
    case ErrorCode::RateTableTooSmall:
      return true;
    default:
      return false;
  }
}

}  // namespace coaltypes
