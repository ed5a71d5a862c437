#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "mpeckit/linalg.hpp"

namespace mpeckit {

// {v : A v <= b, Aeq v = beq}.
struct HPolyhedron {
  std::size_t dim = 0;
  Matrix A;
  Vector b;
  Matrix Aeq;
  Vector beq;

  HPolyhedron() = default;
  explicit HPolyhedron(std::size_t d) : dim(d), A(0, d), Aeq(0, d) {}

  void add_inequality(const Vector& a, const Rational& rhs);
  void add_equality(const Vector& a, const Rational& rhs);
  std::size_t num_inequalities() const { return A.rows(); }
  std::size_t num_equalities() const { return Aeq.rows(); }
  bool contains(const Vector& v) const;
  // Indices of inequalities that hold with equality at v.
  IndexSet active_rows(const Vector& v) const;

  friend bool operator==(const HPolyhedron&, const HPolyhedron&) = default;
};

// {d : n_i^T d <= 0, m_j^T d = 0}.
struct PolyhedralCone {
  std::size_t dim = 0;
  std::vector<Vector> inequalities;
  std::vector<Vector> equalities;

  bool contains(const Vector& d) const;
};

// Tangent cone of a polyhedron at a point that lies in it.
PolyhedralCone tangent_cone(const HPolyhedron& p, const Vector& point);

enum class Sense { Minimize, Maximize };

struct LpOptimal {
  Rational value;
  Vector point;
};
struct LpInfeasible {};
struct LpUnbounded {};
using LpResult = std::variant<LpOptimal, LpInfeasible, LpUnbounded>;

// Exact two-phase simplex over free variables with Bland's rule. The returned
// point is a basic solution, hence a vertex whenever the region is pointed.
LpResult lp_solve(const Vector& c, const HPolyhedron& region, Sense sense);

bool is_feasible(const HPolyhedron& region);

// Some point of the region, or nullopt when empty.
std::optional<Vector> feasible_point(const HPolyhedron& region);

// Euclidean projection by enumerating candidate active sets. Throws
// EmptyPolyhedron, or EnumerationCapExceeded when the inequality count
// exceeds `cap`.
Vector project_polyhedron(const Vector& v, const HPolyhedron& c,
                          std::size_t cap = 16);

// Minimizer of 1/2 z^T H z + h^T z over the region for positive semidefinite
// H, found among faces whose KKT system is nonsingular. nullopt when no such
// face certifies optimality (unbounded or degenerate problems).
std::optional<Vector> convex_qp_minimize(const Matrix& h_mat, const Vector& h,
                                         const HPolyhedron& region,
                                         std::size_t cap = 16);

// Vertices of a bounded polyhedron, lexicographically sorted. Empty when the
// polyhedron is empty; throws UnboundedPolytope when it is unbounded.
std::vector<Vector> vertex_enumeration(const HPolyhedron& polytope);

// Extreme rays of the pointed cone {d : r^T d <= 0 for all rows r}, by the
// double description method. Rays are primitive integer vectors in
// lexicographic order. Requires the rows to span the whole space.
std::vector<Vector> extreme_rays(const std::vector<Vector>& rows,
                                 std::size_t dim);

struct ConeGenerators {
  std::vector<Vector> rays;
  std::vector<Vector> lineality;

  // rays together with +/- each lineality vector, primitive and sorted.
  std::vector<Vector> all() const;
};

ConeGenerators cone_generators(const PolyhedralCone& cone);

}  // namespace mpeckit
