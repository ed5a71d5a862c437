#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpeckit/lower_level.hpp"

namespace mpeckit {

// One side selection of the lower-level complementarity system. Bit i of
// `mask` is 0 when g_i = 0 (lambda_i >= 0) and 1 when lambda_i = 0
// (g_i <= 0). Rows are polynomials over (x, y); the upper-level and joint
// constraints are included.
struct Branch {
  std::size_t id = 0;
  std::size_t dim = 0;  // n + m
  std::uint64_t mask = 0;
  IndexSet g_active;
  std::vector<Polynomial> equalities;    // = 0
  std::vector<Polynomial> inequalities;  // <= 0
  bool linear = false;

  bool contains(const Vector& z) const;
  // Linear branches only.
  HPolyhedron polyhedron() const;
};

std::vector<Branch> enumerate_branches(const MpecInstance& inst,
                                       std::size_t cap = kDefaultEnumerationCap);

struct GeneratorEvidence {
  Vector direction;
  bool realized = false;
  Rational error;  // at the smallest step, when every step had a candidate
};

struct TangentPiece {
  std::size_t branch_id = 0;
  std::uint64_t mask = 0;
  PolyhedralCone cone;
  std::vector<Vector> generators;
  bool exact = false;
  std::string exactness;  // reason for the exactness verdict
  std::vector<GeneratorEvidence> evidence;
  std::vector<Vector> trusted;  // generators backed by exactness or sampling
};

struct ConeUnion {
  Vector base;
  std::vector<TangentPiece> pieces;

  // Trusted generators of all pieces, primitive and sorted.
  std::vector<Vector> generators() const;
  bool all_exact() const;
};

// Throws InfeasiblePoint when the point lies in no branch.
ConeUnion tangent_cone(const MpecInstance& inst, const Point& p,
                       std::size_t cap = kDefaultEnumerationCap);

struct BStationarity {
  bool stationary = true;
  Vector direction;  // witness with |d|_1 <= 1
  Rational value;    // grad f^T direction
  std::optional<std::size_t> piece;
  std::vector<Rational> piece_values;
  ConeUnion cone;
};

BStationarity bstationarity_check(const MpecInstance& inst, const Point& p,
                                  std::size_t cap = kDefaultEnumerationCap);

struct LocalMinCertificate {
  bool local_minimum = false;
  std::string reason;
  bool stationary = false;
  bool convex_objective = false;
  bool pieces_exact = false;
  bool polyhedral = false;
};

LocalMinCertificate local_min_certificate(const MpecInstance& inst,
                                          const Point& p,
                                          std::size_t cap = kDefaultEnumerationCap);

// f as 1/2 z^T H z + h^T z + c when its total degree is at most 2 and H is
// positive semidefinite.
struct ConvexQuadratic {
  Matrix H;
  Vector h;
  Rational c;
};
std::optional<ConvexQuadratic> convex_quadratic(const Polynomial& f);

struct BranchCandidate {
  std::size_t branch_id = 0;
  Vector z;
  Rational value;
};

struct BranchMinimizers {
  std::vector<BranchCandidate> candidates;
  std::optional<std::size_t> best;  // index into candidates
};

// Minimizes a convex quadratic objective over every linear branch.
BranchMinimizers branch_minimizers(const MpecInstance& inst,
                                   std::size_t cap = kDefaultEnumerationCap);

}  // namespace mpeckit
