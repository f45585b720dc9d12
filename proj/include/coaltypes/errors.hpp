#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coaltypes {

enum class ErrorCode {
  NonfiniteMass,
  NegativeWeight,
  InvalidParameter,
  SimplexViolation,
  DuplicateAtom,
  ConditionViolated,
  QuadratureFailure,
  DivergentRate,
  TableTooLarge,
  RateTableTooSmall,
  Overflow,
  UnsupportedMeasure,
  BadEpsilon,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; the code lets callers
// (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// True for failures caused by malformed input rather than by a model
// condition or a numerical problem.
bool is_validation_error(ErrorCode code) noexcept;

}  // namespace coaltypes
