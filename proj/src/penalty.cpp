#include "mpeckit/penalty.hpp"

#include <algorithm>

#include "mpeckit/error.hpp"

namespace mpeckit {

Rational residual_phi(const MpecInstance& inst, const Point& p, std::size_t cap) {
  inst.check_point(p);
  const HPolyhedron c = lower_feasible_set(inst, p.x);
  if (!is_feasible(c)) {
    throw Error(ErrorKind::EmptyLowerFeasibleSet,
                "C(x) is empty at x = " + to_string(p.x));
  }
  const Vector z = p.z();
  Vector shifted = p.y;
  for (std::size_t j = 0; j < inst.m(); ++j) shifted[j] -= inst.F()[j].evaluate(z);
  return norm1(p.y - project_polyhedron(shifted, c, cap));
}

Rational penalized_objective(const MpecInstance& inst, const Point& p,
                             const Rational& rho, std::size_t cap) {
  if (rho.sign() < 0) {
    throw Error(ErrorKind::InvalidArgument, "penalty parameter must be nonnegative");
  }
  const Rational f = inst.objective().evaluate(p.z());
  if (rho.is_zero()) return f;
  return f + rho * residual_phi(inst, p, cap);
}

PenaltyScanReport empirical_exactness_scan(const MpecInstance& inst, const Point& ref,
                                           const std::vector<Rational>& rhos,
                                           const Rational& radius, const Rational& step,
                                           std::size_t cap) {
  inst.check_point(ref);
  if (radius.sign() < 0 || step.sign() <= 0) {
    throw Error(ErrorKind::InvalidArgument, "radius must be >= 0 and step > 0");
  }
  for (const auto& r : rhos) {
    if (r.sign() < 0) {
      throw Error(ErrorKind::InvalidArgument, "penalty parameters must be nonnegative");
    }
  }
  if (!residual_phi(inst, ref, cap).is_zero()) {
    throw Error(ErrorKind::InfeasiblePoint, "reference point is not an equilibrium (phi > 0)");
  }
  PenaltyScanReport rep;
  rep.reference = ref.z();
  rep.reference_value = inst.objective().evaluate(rep.reference);
  rep.radius = radius;
  rep.step = step;
  rep.residual_note =
      "phi(x,y) = |y - Pi_C(x)(y - F(x,y))|_1 (natural residual); empirical desk-scale scan";

  const std::size_t dim = rep.reference.size();
  mpz_class kmax_z = (radius / step).numerator() / (radius / step).denominator();
  const long kmax = kmax_z.get_si();
  std::vector<long> idx(dim, -kmax);

  struct Sample {
    Vector z;
    Rational f, phi;
  };
  std::vector<Sample> samples;
  for (bool done = false; !done;) {
    Vector z = rep.reference;
    for (std::size_t k = 0; k < dim; ++k) z[k] += Rational(idx[k]) * step;
    const Point pt = inst.split(z);
    const bool in_x = inst.upper_set().contains(pt.x);
    const bool in_z = !inst.joint_set() || inst.joint_set()->contains(z);
    if (in_x && in_z) {
      try {
        samples.push_back({z, inst.objective().evaluate(z), residual_phi(inst, pt, cap)});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyLowerFeasibleSet) throw;
      }
    }
    std::size_t k = dim;
    while (k > 0 && idx[k - 1] == kmax) idx[--k] = -kmax;
    if (k == 0) {
      done = true;
    } else {
      ++idx[k - 1];
    }
  }
  rep.grid_points = samples.size();

  for (const auto& rho : rhos) {
    PenaltyScanRow row;
    row.rho = rho;
    bool first = true;
    for (const auto& s : samples) {
      const Rational v = s.f + rho * s.phi;
      if (first || v < row.grid_min) {
        row.grid_min = v;
        row.argmin = s.z;
        first = false;
      }
    }
    row.matches_reference = row.grid_min >= rep.reference_value;
    if (row.matches_reference && (!rep.empirical_rho || rho < *rep.empirical_rho)) {
      rep.empirical_rho = rho;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace mpeckit
