#include "mpeckit/sensitivity.hpp"

#include <algorithm>
#include <set>

#include "mpeckit/error.hpp"

namespace mpeckit {

namespace {

void check_dx(const MpecInstance& inst, const Vector& dx) {
  if (dx.size() != inst.n()) {
    throw Error(ErrorKind::DimensionMismatch,
                "dx has length " + std::to_string(dx.size()) + ", expected n = " +
                    std::to_string(inst.n()));
  }
}

const MultiplierPolytope& require_nonempty_bounded(const MultiplierPolytope& mset) {
  if (!mset.bounded) {
    throw Error(ErrorKind::UnboundedMultiplierSet, "multiplier set is unbounded");
  }
  if (mset.vertices.empty()) {
    throw Error(ErrorKind::EmptyMultiplierSet, "the point admits no multiplier");
  }
  return mset;
}

}  // namespace

std::vector<Vector> critical_multipliers(const MpecInstance& inst, const Point& p,
                                         const Vector& dx) {
  check_dx(inst, dx);
  const MultiplierPolytope mset = multiplier_set(inst, p);
  require_nonempty_bounded(mset);
  const LocalModel lm = local_model(inst, p);
  const Vector c = lm.Gx * dx;
  const auto r = lp_solve(c, mset.h_form, Sense::Maximize);
  const Rational best = std::get<LpOptimal>(r).value;
  std::vector<Vector> out;
  for (const auto& v : mset.vertices) {
    if (dot(c, v) == best) out.push_back(v);
  }
  return out;
}

CriticalCone critical_cone(const MpecInstance& inst, const Point& p,
                           const Vector& lambda, const Vector& dx) {
  check_dx(inst, dx);
  if (lambda.size() != inst.ell()) {
    throw Error(ErrorKind::DimensionMismatch, "lambda has wrong length");
  }
  const LocalModel lm = local_model(inst, p);
  const Vector shift = lm.Gx * dx;
  CriticalCone k;
  k.lambda = lambda;
  k.dx = dx;
  k.set = HPolyhedron(inst.m());
  for (std::size_t i : lm.active) {
    if (lambda[i].sign() > 0) {
      k.equality_rows.push_back(i);
      k.set.add_equality(lm.Gy.row(i), -shift[i]);
    } else {
      k.inequality_rows.push_back(i);
      k.set.add_inequality(lm.Gy.row(i), -shift[i]);
    }
  }
  return k;
}

DirectionalDerivative solve_directional_avi(const MpecInstance& inst, const Point& p,
                                            const Vector& lambda, const Vector& dx,
                                            std::size_t cap) {
  const CriticalCone k = critical_cone(inst, p, lambda, dx);
  const LocalModel lm = local_model(inst, p);
  AviProblem pr;
  pr.M = lm.grad_y_lagrangian(lambda);
  pr.c = lm.grad_x_lagrangian(lambda) * dx;
  pr.Ein = k.set.A;
  pr.bin = -k.set.b;
  pr.Eeq = k.set.Aeq;
  pr.beq = -k.set.beq;
  const AviResult r = solve_avi_system(pr, cap);
  DirectionalDerivative out;
  out.dx = dx;
  out.lambda = lambda;
  for (const auto& s : r.solutions) out.solutions.push_back(s.y);
  if (out.solutions.empty() && r.continua.empty()) {
    throw Error(ErrorKind::NoSolution,
                "directional AVI has no solution for dx = " + to_string(dx) +
                    " and lambda = " + to_string(lambda));
  }
  out.unique = out.solutions.size() == 1 && r.continua.empty();
  out.dy = out.solutions.empty() ? r.continua.front().particular : out.solutions.front();
  return out;
}

DirectionalDerivative directional_derivative(const MpecInstance& inst, const Point& p,
                                             const Vector& dx, std::size_t cap) {
  std::optional<DirectionalDerivative> first;
  for (const auto& lambda : critical_multipliers(inst, p, dx)) {
    DirectionalDerivative d = solve_directional_avi(inst, p, lambda, dx, cap);
    if (!d.unique) {
      throw Error(ErrorKind::AssumptionViolation,
                  "directional AVI solution is not unique for lambda = " + to_string(lambda));
    }
    if (!first) {
      first = std::move(d);
    } else if (d.dy != first->dy) {
      throw Error(ErrorKind::AssumptionViolation,
                  "critical multipliers " + to_string(first->lambda) + " and " +
                      to_string(lambda) + " give different directional derivatives");
    }
  }
  return *first;
}

FrechetResult frechet_test(const MpecInstance& inst, const Point& p, std::size_t cap) {
  const std::size_t n = inst.n(), m = inst.m();
  const LocalModel lm = local_model(inst, p);
  auto in_lineality = [&](const Vector& dx, const Vector& dy) {
    for (std::size_t i : lm.active) {
      if (!(dot(lm.Gx.row(i), dx) + dot(lm.Gy.row(i), dy)).is_zero()) return false;
    }
    return true;
  };
  FrechetResult out;
  out.jacobian = Matrix(m, n);
  std::vector<Vector> plus(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vector e = unit_vector(n, k);
    const Vector dy_plus = directional_derivative(inst, p, e, cap).dy;
    if (!in_lineality(e, dy_plus)) {
      out.witness = e;
      out.reason = "y'(x;dx) lies outside the lineality set for dx = " + to_string(e);
      return out;
    }
    const Vector dy_minus = directional_derivative(inst, p, -e, cap).dy;
    if (!in_lineality(-e, dy_minus)) {
      out.witness = -e;
      out.reason = "y'(x;dx) lies outside the lineality set for dx = " + to_string(-e);
      return out;
    }
    if (!is_zero(dy_plus + dy_minus)) {
      out.witness = e;
      out.reason = "y'(x;dx) + y'(x;-dx) != 0 for dx = " + to_string(e);
      return out;
    }
    plus[k] = dy_plus;
    for (std::size_t j = 0; j < m; ++j) out.jacobian(j, k) = dy_plus[j];
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      const Vector d = unit_vector(n, k) + unit_vector(n, l);
      const Vector dy = directional_derivative(inst, p, d, cap).dy;
      if (!in_lineality(d, dy) || dy != plus[k] + plus[l]) {
        out.witness = d;
        out.reason = "additivity fails for dx = " + to_string(d);
        return out;
      }
    }
  }
  out.differentiable = true;
  return out;
}

Rational reduced_directional_derivative(const MpecInstance& inst, const Point& p,
                                        const Vector& dx, std::size_t cap) {
  check_dx(inst, dx);
  const LocalModel lm = local_model(inst, p);
  const std::size_t n = inst.n();
  Rational value;
  for (std::size_t k = 0; k < n; ++k) value += lm.grad_f[k] * dx[k];
  if (is_zero(dx)) return value;
  const Vector dy = directional_derivative(inst, p, dx, cap).dy;
  for (std::size_t j = 0; j < inst.m(); ++j) value += lm.grad_f[n + j] * dy[j];
  return value;
}

std::vector<Vector> default_directions(const MpecInstance& inst, const Vector& x) {
  const PolyhedralCone t = tangent_cone(inst.upper_set(), x);
  std::set<Vector> dirs;
  for (const auto& g : cone_generators(t).all()) dirs.insert(g);
  for (std::size_t k = 0; k < inst.n(); ++k) {
    for (const Vector& e : {unit_vector(inst.n(), k), -unit_vector(inst.n(), k)}) {
      if (t.contains(e)) dirs.insert(e);
    }
  }
  return {dirs.begin(), dirs.end()};
}

ImpStationarity imp_stationarity_check(const MpecInstance& inst, const Point& p,
                                       const std::vector<Vector>& directions,
                                       std::size_t cap) {
  ImpStationarity out;
  for (const auto& d : directions) {
    const Rational v = reduced_directional_derivative(inst, p, d, cap);
    out.tested.emplace_back(d, v);
    if (v.sign() < 0 && (out.stationary || v < out.value)) {
      out.stationary = false;
      out.witness = d;
      out.value = v;
    }
  }
  try {
    out.branch_stationary = bstationarity_check(inst, p, cap).stationary;
  } catch (const Error&) {
    out.branch_stationary.reset();
  }
  return out;
}

ImpStationarity imp_stationarity_check(const MpecInstance& inst, const Point& p,
                                       std::size_t cap) {
  return imp_stationarity_check(inst, p, default_directions(inst, p.x), cap);
}

}  // namespace mpeckit
