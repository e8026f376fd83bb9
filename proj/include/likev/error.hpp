#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace likev {

enum class ErrorCode {
  // model construction and input validation
  InvalidArgument,
  NegativeProbability,
  RowNotNormalized,
  InvalidComposition,
  InvalidGrid,
  InvalidConfig,
  OutcomeNotInSpace,
  PointNotInSpace,
  // modelspec parsing
  SyntaxError,
  DuplicateRow,
  MissingRow,
  UnknownValue,
  // domain errors raised by analyses
  ImpossibleObservation,
  UndefinedRatio,
  CrossModelComparison,
  NuisanceDependent,
  EnumerationTooLarge,
  EmptyInterest,
  SpecInconsistent,
};

std::string_view error_name(ErrorCode code);

/// True for codes that describe malformed input (models, files, points)
/// rather than a well-formed question without a defined answer.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace likev
