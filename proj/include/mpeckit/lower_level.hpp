#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mpeckit/instance.hpp"

namespace mpeckit {

inline constexpr std::size_t kDefaultEnumerationCap = 16;

// First- and second-order data of the lower level at a point (x, y).
struct LocalModel {
  Vector F;                 // m
  Matrix Fx, Fy;            // m x n, m x m
  Vector g;                 // ell
  Matrix Gx, Gy;            // ell x n, ell x m
  std::vector<Matrix> Hyy;  // per constraint, m x m
  std::vector<Matrix> Hyx;  // per constraint, m x n
  IndexSet active;          // {i : g_i = 0}
  Vector grad_f;            // n + m

  // Jacobians of L(x,y,lambda) = F + sum_i lambda_i grad_y g_i.
  Matrix grad_y_lagrangian(const Vector& lambda) const;
  Matrix grad_x_lagrangian(const Vector& lambda) const;
};

LocalModel local_model(const MpecInstance& inst, const Point& p);

// Affine VI in KKT form: find y and multipliers (mu, nu) with
//   M y + c + Ein^T mu + Eeq^T nu = 0,
//   Ein y + bin <= 0,  mu >= 0,  mu_i (Ein y + bin)_i = 0,
//   Eeq y + beq = 0.
struct AviProblem {
  Matrix M;
  Vector c;
  Matrix Ein;
  Vector bin;
  Matrix Eeq;
  Vector beq;
};

struct AviSolution {
  Vector y;
  IndexSet active;  // inequality rows with (Ein y + bin)_i = 0
  Vector mu;
  Vector nu;
};

// A pattern whose solutions form a continuum: particular + span(directions)
// intersected with the pattern's sign conditions.
struct AviContinuum {
  Vector particular;
  std::vector<Vector> directions;
  IndexSet pattern;
};

struct AviResult {
  std::vector<AviSolution> solutions;  // distinct y, lexicographic
  std::vector<AviContinuum> continua;
  bool exhaustive = true;
};

// Enumerates all 2^k active patterns of the k inequality rows. Throws
// EnumerationCapExceeded when k > cap.
AviResult solve_avi_system(const AviProblem& problem,
                           std::size_t cap = kDefaultEnumerationCap);

// A root known only up to a rational enclosing interval.
struct IrrationalRoot {
  Rational lo, hi;
  std::string source;
};

struct ViSolution {
  Vector y;
  IndexSet active;
  Vector lambda;
};

struct ViSolutionSet {
  std::vector<ViSolution> solutions;
  std::vector<AviContinuum> continua;
  std::vector<IrrationalRoot> irrational;
  bool exhaustive = true;
};

// C(x) as a polyhedron in y. Polynomial constraints must reduce to affine
// or convex quadratic (m = 1, rational roots) constraints at this x.
HPolyhedron lower_feasible_set(const MpecInstance& inst, const Vector& x);

ViSolutionSet solve_avi(const MpecInstance& inst, const Vector& x,
                        std::size_t cap = kDefaultEnumerationCap);
ViSolutionSet solve_polynomial_vi(const MpecInstance& inst, const Vector& x);
// Dispatches on the lower-level type.
ViSolutionSet solve_lower(const MpecInstance& inst, const Vector& x,
                          std::size_t cap = kDefaultEnumerationCap);

struct KktViolation {
  std::string relation;  // stationarity, sign, feasibility, complementarity
  std::size_t index;
  Rational residual;
};

struct KktReport {
  std::vector<KktViolation> violations;
  bool valid() const { return violations.empty(); }
};

KktReport check_kkt(const MpecInstance& inst, const Vector& x, const Vector& y,
                    const Vector& lambda);

struct NormalMapPoint {
  Vector x, v, y, H;
  bool is_zero = false;
};

NormalMapPoint normal_map_eval(const MpecInstance& inst, const Vector& x,
                               const Vector& v,
                               std::size_t cap = kDefaultEnumerationCap);

struct ImplicitMapSample {
  Vector x;
  std::size_t count = 0;
  bool exhaustive = true;
  std::optional<Vector> y;  // set when the solution is unique
};

struct ImplicitMapTable {
  std::vector<ImplicitMapSample> rows;
  // Maximal runs [first, last] of consecutive grid points with a unique
  // solution. Grid-pointwise only; no neighborhood claim.
  std::vector<std::pair<std::size_t, std::size_t>> single_valued_runs;
};

ImplicitMapTable sample_implicit_map(const MpecInstance& inst,
                                     const std::vector<Vector>& grid,
                                     std::size_t cap = kDefaultEnumerationCap);

// Real roots of c0 + c1 t + c2 t^2 (trailing zeros trimmed). Rational roots
// go to `exact`, irrational ones to `enclosures`. The zero polynomial yields
// no roots; callers test for it separately.
struct RootSet {
  std::vector<Rational> exact;
  std::vector<std::pair<Rational, Rational>> enclosures;
};
RootSet real_roots(const std::vector<Rational>& coeffs);

}  // namespace mpeckit
