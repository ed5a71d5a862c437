#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpeckit/geometry.hpp"
#include "mpeckit/multipliers.hpp"

namespace mpeckit {

// Vertices of M(x) maximizing sum_i lambda_i grad_x g_i^T dx. Throws
// EmptyMultiplierSet or UnboundedMultiplierSet.
std::vector<Vector> critical_multipliers(const MpecInstance& inst, const Point& p,
                                         const Vector& dx);

// K(x,lambda;dx) over dy: grad_x g_i^T dx + grad_y g_i^T dy = 0 where
// lambda_i > 0, and <= 0 for active i with lambda_i = 0.
struct CriticalCone {
  Vector lambda;
  Vector dx;
  IndexSet equality_rows;
  IndexSet inequality_rows;
  HPolyhedron set;
};

CriticalCone critical_cone(const MpecInstance& inst, const Point& p,
                           const Vector& lambda, const Vector& dx);

struct DirectionalDerivative {
  Vector dx;
  Vector dy;
  Vector lambda;
  bool unique = false;
  std::vector<Vector> solutions;
};

// Solves the directional AVI over K with operator
// dy -> grad_x L dx + grad_y L dy. Throws NoSolution.
DirectionalDerivative solve_directional_avi(const MpecInstance& inst, const Point& p,
                                            const Vector& lambda, const Vector& dx,
                                            std::size_t cap = kDefaultEnumerationCap);

// y'(x;dx) using every critical multiplier; raises AssumptionViolation when
// they disagree or a solve is not unique.
DirectionalDerivative directional_derivative(const MpecInstance& inst, const Point& p,
                                             const Vector& dx,
                                             std::size_t cap = kDefaultEnumerationCap);

struct FrechetResult {
  bool differentiable = false;
  Matrix jacobian;  // m x n, columns y'(x;e_k)
  Vector witness;   // failing direction
  std::string reason;
};

// Tests directions +e_k, -e_k and pairwise sums e_k + e_l.
FrechetResult frechet_test(const MpecInstance& inst, const Point& p,
                           std::size_t cap = kDefaultEnumerationCap);

// grad_x f^T dx + grad_y f^T y'(x;dx).
Rational reduced_directional_derivative(const MpecInstance& inst, const Point& p,
                                        const Vector& dx,
                                        std::size_t cap = kDefaultEnumerationCap);

struct ImpStationarity {
  bool stationary = true;
  Vector witness;
  Rational value;
  std::vector<std::pair<Vector, Rational>> tested;
  // Verdict of the branchwise LP test over the tangent cone, which is
  // complete over all directions.
  std::optional<bool> branch_stationary;
};

// Default directions: generators of T(x;X) plus the coordinate directions
// +/- e_k lying in it.
std::vector<Vector> default_directions(const MpecInstance& inst, const Vector& x);

ImpStationarity imp_stationarity_check(const MpecInstance& inst, const Point& p,
                                       const std::vector<Vector>& directions,
                                       std::size_t cap = kDefaultEnumerationCap);
ImpStationarity imp_stationarity_check(const MpecInstance& inst, const Point& p,
                                       std::size_t cap = kDefaultEnumerationCap);

}  // namespace mpeckit
