#include "mpeckit/geometry.hpp"

#include <algorithm>
#include <set>

#include "mpeckit/error.hpp"

namespace mpeckit {

bool Branch::contains(const Vector& z) const {
  for (const auto& p : equalities) {
    if (!p.evaluate(z).is_zero()) return false;
  }
  for (const auto& p : inequalities) {
    if (p.evaluate(z).sign() > 0) return false;
  }
  return true;
}

HPolyhedron Branch::polyhedron() const {
  if (!linear) throw Error(ErrorKind::Unsupported, "branch is not polyhedral");
  HPolyhedron h(dim);
  for (const auto& p : inequalities) {
    auto [a, c] = p.affine_parts();
    h.add_inequality(a, -c);
  }
  for (const auto& p : equalities) {
    auto [a, c] = p.affine_parts();
    h.add_equality(a, -c);
  }
  return h;
}

namespace {

// Upper-level and joint constraints as rows over (x, y).
void add_set_rows(const MpecInstance& inst, Branch& br) {
  const std::size_t n = inst.n(), m = inst.m();
  auto lift = [&](const Vector& a, std::size_t offset_dim) {
    Vector full(n + m);
    for (std::size_t j = 0; j < offset_dim; ++j) full[j] = a[j];
    return full;
  };
  const HPolyhedron& x_set = inst.upper_set();
  for (std::size_t i = 0; i < x_set.num_inequalities(); ++i) {
    br.inequalities.push_back(Polynomial::affine(lift(x_set.A.row(i), n), -x_set.b[i]));
  }
  for (std::size_t i = 0; i < x_set.num_equalities(); ++i) {
    br.equalities.push_back(Polynomial::affine(lift(x_set.Aeq.row(i), n), -x_set.beq[i]));
  }
  if (const auto& z = inst.joint_set()) {
    for (std::size_t i = 0; i < z->num_inequalities(); ++i) {
      br.inequalities.push_back(Polynomial::affine(z->A.row(i), -z->b[i]));
    }
    for (std::size_t i = 0; i < z->num_equalities(); ++i) {
      br.equalities.push_back(Polynomial::affine(z->Aeq.row(i), -z->beq[i]));
    }
  }
}

bool rows_linear(const Branch& br) {
  auto lin = [](const Polynomial& p) { return p.total_degree() <= 1; };
  return std::all_of(br.equalities.begin(), br.equalities.end(), lin) &&
         std::all_of(br.inequalities.begin(), br.inequalities.end(), lin);
}

// Single-variable quadratic q with no real root (and, for inequalities,
// positive everywhere).
bool quadratic_without_roots(const Polynomial& p, bool require_positive) {
  std::size_t var = p.num_vars();
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (var != p.num_vars() && var != j) return false;
      var = j;
    }
  }
  if (var == p.num_vars() || p.degree_in(var) != 2) return false;
  const auto c = p.univariate_coefficients(var, Vector(p.num_vars()));
  const Rational disc = c[1] * c[1] - Rational(4) * c[2] * c[0];
  if (disc.sign() >= 0) return false;
  return !require_positive || c[2].sign() > 0;
}

bool provably_empty(const Branch& br) {
  for (const auto& p : br.equalities) {
    if (p.is_constant() && !p.is_zero()) return true;
    if (quadratic_without_roots(p, false)) return true;
  }
  for (const auto& p : br.inequalities) {
    if (p.is_constant() && !p.is_zero() && p.terms().begin()->second.sign() > 0) return true;
    if (quadratic_without_roots(p, true)) return true;
  }
  return false;
}

void drop_zero_rows(std::vector<Polynomial>& rows) {
  rows.erase(std::remove_if(rows.begin(), rows.end(),
                            [](const Polynomial& p) { return p.is_zero(); }),
             rows.end());
}

std::optional<Branch> affine_branch(const MpecInstance& inst, std::uint64_t mask) {
  const std::size_t m = inst.m(), ell = inst.ell();
  const AffineVi& a = inst.affine();
  Branch br;
  br.dim = inst.n() + inst.m();
  br.mask = mask;
  IndexSet rest;
  for (std::size_t i = 0; i < ell; ++i) {
    ((mask >> i) & 1u ? rest : br.g_active).push_back(i);
  }
  const Matrix s = a.E.select_rows(br.g_active);
  if (rank_of(s) != br.g_active.size()) return std::nullopt;
  for (std::size_t i : br.g_active) br.equalities.push_back(inst.g()[i]);
  for (std::size_t i : rest) br.inequalities.push_back(inst.g()[i]);

  // lambda_A(z) = -K F(z) with K = (S S^T)^{-1} S.
  const std::size_t k = br.g_active.size();
  Matrix kmat(k, m);
  const Matrix sst = s * s.transpose();
  for (std::size_t j = 0; j < m; ++j) {
    const auto col = solve_unique(sst, s.col(j));
    for (std::size_t t = 0; t < k; ++t) kmat(t, j) = (*col)[t];
  }
  std::vector<Polynomial> kf;
  for (std::size_t t = 0; t < k; ++t) {
    Polynomial row(inst.n() + m);
    for (std::size_t j = 0; j < m; ++j) row += kmat(t, j) * inst.F()[j];
    kf.push_back(row);
    br.inequalities.push_back(row);  // -lambda_t <= 0
  }
  // F + S^T lambda_A = F - S^T K F = 0.
  for (std::size_t j = 0; j < m; ++j) {
    Polynomial row = inst.F()[j];
    for (std::size_t t = 0; t < k; ++t) row -= s(t, j) * kf[t];
    br.equalities.push_back(row);
  }
  add_set_rows(inst, br);
  drop_zero_rows(br.equalities);
  drop_zero_rows(br.inequalities);
  br.linear = true;
  return br;
}

std::optional<Branch> polynomial_branch(const MpecInstance& inst, std::uint64_t mask) {
  const std::size_t n = inst.n(), ell = inst.ell();
  Branch br;
  br.dim = inst.n() + inst.m();
  br.mask = mask;
  IndexSet rest;
  for (std::size_t i = 0; i < ell; ++i) {
    ((mask >> i) & 1u ? rest : br.g_active).push_back(i);
  }
  if (br.g_active.size() > 1) return std::nullopt;
  const Polynomial& f = inst.F()[0];
  if (br.g_active.empty()) {
    br.equalities.push_back(f);
  } else {
    const std::size_t i = br.g_active[0];
    const Polynomial dg = inst.g()[i].derivative(n);
    if (dg.is_zero()) return std::nullopt;
    br.equalities.push_back(inst.g()[i]);
    // lambda_i = -F / dg >= 0.
    if (dg.is_constant()) {
      const int sgn = dg.terms().begin()->second.sign();
      br.inequalities.push_back(Rational(sgn) * f);
    } else {
      br.inequalities.push_back(f * dg);
    }
  }
  for (std::size_t i : rest) br.inequalities.push_back(inst.g()[i]);
  add_set_rows(inst, br);
  drop_zero_rows(br.equalities);
  drop_zero_rows(br.inequalities);
  br.linear = rows_linear(br);
  return br;
}

}  // namespace

std::vector<Branch> enumerate_branches(const MpecInstance& inst, std::size_t cap) {
  const std::size_t ell = inst.ell();
  if (ell > cap || ell >= 63) {
    throw Error(ErrorKind::EnumerationCapExceeded,
                std::to_string(ell) + " complementarity pairs exceed the cap " +
                    std::to_string(cap));
  }
  if (!inst.is_affine() && inst.m() != 1) {
    throw Error(ErrorKind::UnsupportedDimension,
                "polynomial branch decomposition requires m = 1");
  }
  std::vector<Branch> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ell); ++mask) {
    auto br = inst.is_affine() ? affine_branch(inst, mask) : polynomial_branch(inst, mask);
    if (!br) continue;
    if (br->linear ? !is_feasible(br->polyhedron()) : provably_empty(*br)) continue;
    br->id = out.size();
    out.push_back(std::move(*br));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tangent cones

std::vector<Vector> ConeUnion::generators() const {
  std::set<Vector> all;
  for (const auto& piece : pieces) {
    for (const auto& d : piece.trusted) all.insert(primitive_direction(d));
  }
  return {all.begin(), all.end()};
}

bool ConeUnion::all_exact() const {
  return std::all_of(pieces.begin(), pieces.end(),
                     [](const TangentPiece& p) { return p.exact; });
}

namespace {

Vector gradient_at(const Polynomial& p, const Vector& z) {
  Vector g(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) g[k] = p.derivative(k).evaluate(z);
  return g;
}

Rational norm_inf(const Vector& v) {
  Rational r;
  for (const auto& e : v) r = max(r, e.abs());
  return r;
}

// MFCQ for the branch system: independent equality gradients and a
// direction strictly decreasing every active inequality.
bool branch_mfcq(const PolyhedralCone& cone) {
  const std::size_t d = cone.dim;
  const Matrix eq = Matrix::from_rows(cone.equalities, d);
  if (rank_of(eq) != cone.equalities.size()) return false;
  HPolyhedron lp(d);
  for (const auto& e : cone.equalities) lp.add_equality(e, 0);
  for (const auto& r : cone.inequalities) lp.add_inequality(r, -1);
  return is_feasible(lp);
}

const Rational kSampleSteps[] = {Rational(1, 8), Rational(1, 64), Rational(1, 512)};
const Rational kSampleTolerance(1, 16);

GeneratorEvidence sample_generator(const MpecInstance& inst, const Branch& br,
                                   const Point& p, const Vector& d) {
  const std::size_t n = inst.n(), m = inst.m();
  const Vector zbar = p.z();
  const Vector dn = Rational(1) / norm_inf(d) * d;
  GeneratorEvidence ev;
  ev.direction = d;
  ev.realized = true;
  for (const Rational& t : kSampleSteps) {
    std::vector<Vector> candidates;
    candidates.push_back(zbar + t * d);
    Vector xt(p.x);
    for (std::size_t k = 0; k < n; ++k) xt[k] += t * d[k];
    if (m == 1) {
      for (const auto& row : br.equalities) {
        const Polynomial r = restrict_to_y(row, xt, 1);
        if (r.is_zero() || r.degree_in(0) > 2) continue;
        for (const auto& y : real_roots(r.univariate_coefficients(0, Vector{0})).exact) {
          candidates.push_back(concat(xt, Vector{y}));
        }
      }
    }
    std::optional<Rational> best;
    for (const auto& z : candidates) {
      if (z == zbar || !br.contains(z)) continue;
      const Vector diff = z - zbar;
      const Rational err = norm_inf(Rational(1) / norm_inf(diff) * diff - dn);
      if (!best || err < *best) best = err;
    }
    if (!best) {
      ev.realized = false;
      return ev;
    }
    ev.error = *best;
  }
  ev.realized = ev.error <= kSampleTolerance;
  return ev;
}

}  // namespace

ConeUnion tangent_cone(const MpecInstance& inst, const Point& p, std::size_t cap) {
  inst.check_point(p);
  const Vector zbar = p.z();
  ConeUnion out;
  out.base = zbar;
  for (const Branch& br : enumerate_branches(inst, cap)) {
    if (!br.contains(zbar)) continue;
    TangentPiece piece;
    piece.branch_id = br.id;
    piece.mask = br.mask;
    piece.cone.dim = zbar.size();
    for (const auto& row : br.equalities) {
      piece.cone.equalities.push_back(gradient_at(row, zbar));
    }
    for (const auto& row : br.inequalities) {
      if (row.evaluate(zbar).is_zero()) piece.cone.inequalities.push_back(gradient_at(row, zbar));
    }
    piece.generators = cone_generators(piece.cone).all();
    if (br.linear) {
      piece.exact = true;
      piece.exactness = "polyhedral branch";
    } else if (branch_mfcq(piece.cone)) {
      piece.exact = true;
      piece.exactness = "branch constraints satisfy MFCQ";
    } else {
      piece.exactness = "linearization unverified; generators sampled";
    }
    if (piece.exact) {
      piece.trusted = piece.generators;
    } else {
      for (const auto& d : piece.generators) {
        GeneratorEvidence ev = sample_generator(inst, br, p, d);
        if (ev.realized) piece.trusted.push_back(d);
        piece.evidence.push_back(std::move(ev));
      }
    }
    out.pieces.push_back(std::move(piece));
  }
  if (out.pieces.empty()) {
    throw Error(ErrorKind::InfeasiblePoint,
                "point " + to_string(zbar) + " lies in no branch of the feasible set");
  }
  return out;
}

BStationarity bstationarity_check(const MpecInstance& inst, const Point& p,
                                  std::size_t cap) {
  BStationarity out;
  out.cone = tangent_cone(inst, p, cap);
  const LocalModel lm = local_model(inst, p);
  const std::size_t d = lm.grad_f.size();
  for (std::size_t pi = 0; pi < out.cone.pieces.size(); ++pi) {
    const auto& gens = out.cone.pieces[pi].trusted;
    const std::size_t k = gens.size();
    if (k == 0) {
      out.piece_values.push_back(0);
      continue;
    }
    // Variables (mu, s): d = G mu, mu >= 0, -s <= d <= s, sum s <= 1.
    HPolyhedron lp(k + d);
    for (std::size_t t = 0; t < k; ++t) lp.add_inequality(-unit_vector(k + d, t), 0);
    for (std::size_t j = 0; j < d; ++j) {
      Vector up(k + d), down(k + d);
      for (std::size_t t = 0; t < k; ++t) {
        up[t] = gens[t][j];
        down[t] = -gens[t][j];
      }
      up[k + j] = -1;
      down[k + j] = -1;
      lp.add_inequality(up, 0);
      lp.add_inequality(down, 0);
    }
    Vector sum(k + d);
    for (std::size_t j = 0; j < d; ++j) sum[k + j] = 1;
    lp.add_inequality(sum, 1);
    Vector cost(k + d);
    for (std::size_t t = 0; t < k; ++t) cost[t] = dot(lm.grad_f, gens[t]);
    const auto r = lp_solve(cost, lp, Sense::Minimize);
    const auto& opt = std::get<LpOptimal>(r);
    out.piece_values.push_back(opt.value);
    if (opt.value.sign() < 0 && out.stationary) {
      out.stationary = false;
      out.piece = pi;
      out.value = opt.value;
      out.direction = zeros(d);
      for (std::size_t t = 0; t < k; ++t) out.direction = out.direction + opt.point[t] * gens[t];
    }
  }
  if (out.stationary) out.direction = zeros(d);
  return out;
}

std::optional<ConvexQuadratic> convex_quadratic(const Polynomial& f) {
  if (f.total_degree() > 2) return std::nullopt;
  ConvexQuadratic q;
  q.H = constant_hessian(f);
  if (!is_psd(q.H)) return std::nullopt;
  const Vector origin(f.num_vars());
  q.h = Vector(f.num_vars());
  for (std::size_t k = 0; k < f.num_vars(); ++k) q.h[k] = f.derivative(k).evaluate(origin);
  q.c = f.evaluate(origin);
  return q;
}

LocalMinCertificate local_min_certificate(const MpecInstance& inst, const Point& p,
                                          std::size_t cap) {
  LocalMinCertificate out;
  const BStationarity bs = bstationarity_check(inst, p, cap);
  out.stationary = bs.stationary;
  out.pieces_exact = bs.cone.all_exact();
  out.polyhedral = inst.is_affine();
  out.convex_objective = convex_quadratic(inst.objective()).has_value();
  if (!out.polyhedral) {
    out.reason = "lower level is not affine; branches are not all polyhedral";
  } else if (!out.pieces_exact) {
    out.reason = "some tangent pieces are unverified";
  } else if (!out.stationary) {
    out.reason = "point is not B-stationary";
  } else if (!out.convex_objective) {
    out.reason = "objective is not a convex quadratic";
  } else {
    out.local_minimum = true;
    out.reason = "B-stationary with convex objective on polyhedral branches; local, not global";
  }
  return out;
}

BranchMinimizers branch_minimizers(const MpecInstance& inst, std::size_t cap) {
  const auto q = convex_quadratic(inst.objective());
  if (!q) {
    throw Error(ErrorKind::Unsupported, "branch minimization needs a convex quadratic objective");
  }
  BranchMinimizers out;
  for (const Branch& br : enumerate_branches(inst, cap)) {
    if (!br.linear) continue;
    const auto z = convex_qp_minimize(q->H, q->h, br.polyhedron(), 2 * cap);
    if (!z) continue;
    out.candidates.push_back({br.id, *z, inst.objective().evaluate(*z)});
  }
  for (std::size_t i = 0; i < out.candidates.size(); ++i) {
    if (!out.best) {
      out.best = i;
      continue;
    }
    const auto& b = out.candidates[*out.best];
    const auto& c = out.candidates[i];
    if (c.value < b.value || (c.value == b.value && c.z < b.z)) out.best = i;
  }
  return out;
}

}  // namespace mpeckit
