#pragma once

#include <vector>

#include "mpeckit/lower_level.hpp"

namespace mpeckit {

// M(x) = {lambda >= 0 : F + Gy^T lambda = 0, lambda_i = 0 off the active set}.
struct MultiplierPolytope {
  std::size_t ell = 0;
  HPolyhedron h_form;
  IndexSet active;
  bool bounded = true;
  std::vector<Vector> vertices;  // lexicographic; empty when unbounded

  bool is_empty() const { return bounded && vertices.empty(); }
};

// Throws InfeasiblePoint when g(x,y) <= 0 fails.
MultiplierPolytope multiplier_set(const MpecInstance& inst, const Point& p);

IndexSet support(const Vector& lambda);

// The index family B(x): J within the active set with independent gradients
// and an extreme multiplier supported in J.
struct ScocFamily {
  std::vector<IndexSet> sets;      // by size, then lexicographic
  std::vector<Vector> witnesses;   // lexicographically first vertex per set
};

// Throws EmptyMultiplierSet or UnboundedMultiplierSet.
ScocFamily scoc_family(const MpecInstance& inst, const Point& p,
                       const MultiplierPolytope& mset);

// Subsets of `base` ordered by size, then lexicographically.
std::vector<IndexSet> subsets_by_size(const IndexSet& base);

}  // namespace mpeckit
