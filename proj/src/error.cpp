#include "likev/error.hpp"

namespace likev {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::RowNotNormalized: return "RowNotNormalized";
    case ErrorCode::InvalidComposition: return "InvalidComposition";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::OutcomeNotInSpace: return "OutcomeNotInSpace";
    case ErrorCode::PointNotInSpace: return "PointNotInSpace";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateRow: return "DuplicateRow";
    case ErrorCode::MissingRow: return "MissingRow";
    case ErrorCode::UnknownValue: return "UnknownValue";
    case ErrorCode::ImpossibleObservation: return "ImpossibleObservation";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::CrossModelComparison: return "CrossModelComparison";
    case ErrorCode::NuisanceDependent: return "NuisanceDependent";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::EmptyInterest: return "EmptyInterest";
    case ErrorCode::SpecInconsistent: return "SpecInconsistent";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::NegativeProbability:
    case ErrorCode::RowNotNormalized:
    case ErrorCode::InvalidComposition:
    case ErrorCode::InvalidGrid:
    case ErrorCode::InvalidConfig:
    case ErrorCode::OutcomeNotInSpace:
    case ErrorCode::PointNotInSpace:
    case ErrorCode::SyntaxError:
    case ErrorCode::DuplicateRow:
    case ErrorCode::MissingRow:
    case ErrorCode::UnknownValue:
      return true;
    default:
      return false;
  }
}

}  // namespace likev
