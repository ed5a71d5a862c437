#include "mpeckit/error.hpp"

namespace mpeckit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownLowerLevelType: return "UnknownLowerLevelType";
    case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorKind::NonSquareMatrix: return "NonSquareMatrix";
    case ErrorKind::EmptyPolyhedron: return "EmptyPolyhedron";
    case ErrorKind::UnboundedPolytope: return "UnboundedPolytope";
    case ErrorKind::EmptyLowerFeasibleSet: return "EmptyLowerFeasibleSet";
    case ErrorKind::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorKind::EmptyMultiplierSet: return "EmptyMultiplierSet";
    case ErrorKind::UnboundedMultiplierSet: return "UnboundedMultiplierSet";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::AssumptionViolation: return "AssumptionViolation";
  }
  return "Error";
}

bool is_assumption_violation(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyPolyhedron:
    case ErrorKind::UnboundedPolytope:
    case ErrorKind::EmptyLowerFeasibleSet:
    case ErrorKind::InfeasiblePoint:
    case ErrorKind::EmptyMultiplierSet:
    case ErrorKind::UnboundedMultiplierSet:
    case ErrorKind::NoSolution:
    case ErrorKind::AssumptionViolation:
      return true;
    default:
      return false;
  }
}

}  // namespace mpeckit
