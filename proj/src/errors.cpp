#include "ftnet/errors.hpp"

namespace ftnet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::DegenerateEdge: return "DegenerateEdge";
    case ErrorCode::PointOnEdge: return "PointOnEdge";
    case ErrorCode::Unrealizable: return "Unrealizable";
    case ErrorCode::RootOutOfRange: return "RootOutOfRange";
    case ErrorCode::NoMatchingRoot: return "NoMatchingRoot";
    case ErrorCode::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::AtVertex: return "AtVertex";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NotCoplanar: return "NotCoplanar";
    case ErrorCode::InvalidMassBudget: return "InvalidMassBudget";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::BudgetInconsistent: return "BudgetInconsistent";
    case ErrorCode::InfeasibleSplit: return "InfeasibleSplit";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::SignDegenerate: return "SignDegenerate";
    case ErrorCode::FloatingViolated: return "FloatingViolated";
    case ErrorCode::EvaluationFailed: return "EvaluationFailed";
    case ErrorCode::EmptyFeasibleInterval: return "EmptyFeasibleInterval";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation:
    case ErrorCode::InvalidConfiguration:
    case ErrorCode::DegenerateSegment:
    case ErrorCode::DegeneratePlane:
    case ErrorCode::DegenerateEdge:
    case ErrorCode::PointOnEdge:
    case ErrorCode::Unrealizable:
    case ErrorCode::AtVertex:
    case ErrorCode::NotInterior:
    case ErrorCode::NotCoplanar:
    case ErrorCode::InvalidMassBudget:
    case ErrorCode::InfeasibleSplit:
    case ErrorCode::FloatingViolated:
      return true;
    default:
      return false;
  }
}

}  // namespace ftnet
