#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpeckit/lower_level.hpp"

namespace mpeckit {

// Natural residual |y - Pi_C(x)(y - F(x,y))|_1. Throws EmptyLowerFeasibleSet.
Rational residual_phi(const MpecInstance& inst, const Point& p,
                      std::size_t cap = kDefaultEnumerationCap);

// f(z) + rho * phi(z); rho must be nonnegative.
Rational penalized_objective(const MpecInstance& inst, const Point& p,
                             const Rational& rho,
                             std::size_t cap = kDefaultEnumerationCap);

struct PenaltyScanRow {
  Rational rho;
  Rational grid_min;
  Vector argmin;  // lexicographically first minimizer
  bool matches_reference = false;
};

struct PenaltyScanReport {
  Vector reference;
  Rational reference_value;  // f at the reference point
  Rational radius, step;
  std::size_t grid_points = 0;  // points evaluated
  std::vector<PenaltyScanRow> rows;  // in the order of the rho list
  std::optional<Rational> empirical_rho;
  std::string residual_note;
};

// Minimizes the penalized objective over the grid reference + step * k
// within the infinity-ball of the given radius, restricted to X and Z and to
// points with nonempty C(x). Desk-scale and empirical.
PenaltyScanReport empirical_exactness_scan(const MpecInstance& inst, const Point& ref,
                                           const std::vector<Rational>& rhos,
                                           const Rational& radius, const Rational& step,
                                           std::size_t cap = kDefaultEnumerationCap);

}  // namespace mpeckit
