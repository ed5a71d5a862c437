#pragma once

#include <stdexcept>
#include <string>

namespace mpeckit {

enum class ErrorKind {
  // Input errors: malformed files, arguments or unsupported problem classes.
  Parse,
  InvalidArgument,
  DimensionMismatch,
  UnknownLowerLevelType,
  DegreeTooHigh,
  UnsupportedDimension,
  Unsupported,
  EnumerationCapExceeded,
  NonSquareMatrix,
  // Assumption violations: the analysis is well posed but a hypothesis fails.
  EmptyPolyhedron,
  UnboundedPolytope,
  EmptyLowerFeasibleSet,
  InfeasiblePoint,
  EmptyMultiplierSet,
  UnboundedMultiplierSet,
  NoSolution,
  AssumptionViolation,
};

const char* to_string(ErrorKind kind);

// True for kinds that signal a failed hypothesis rather than bad input.
bool is_assumption_violation(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mpeckit
