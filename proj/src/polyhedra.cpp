#include "mpeckit/polyhedra.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "mpeckit/error.hpp"

namespace mpeckit {

void HPolyhedron::add_inequality(const Vector& a, const Rational& rhs) {
  if (a.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "inequality row length");
  }
  if (A.rows() == 0) A = Matrix(0, dim);
  A.append_row(a);
  b.push_back(rhs);
}

void HPolyhedron::add_equality(const Vector& a, const Rational& rhs) {
  if (a.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "equality row length");
  }
  if (Aeq.rows() == 0) Aeq = Matrix(0, dim);
  Aeq.append_row(a);
  beq.push_back(rhs);
}

bool HPolyhedron::contains(const Vector& v) const {
  if (v.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "point dimension");
  }
  const Vector lhs = A * v;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] > b[i]) return false;
  }
  const Vector eq = Aeq * v;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    if (eq[i] != beq[i]) return false;
  }
  return true;
}

IndexSet HPolyhedron::active_rows(const Vector& v) const {
  IndexSet out;
  const Vector lhs = A * v;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] == b[i]) out.push_back(i);
  }
  return out;
}

bool PolyhedralCone::contains(const Vector& d) const {
  for (const auto& n : inequalities) {
    if (dot(n, d).sign() > 0) return false;
  }
  for (const auto& m : equalities) {
    if (!dot(m, d).is_zero()) return false;
  }
  return true;
}

PolyhedralCone tangent_cone(const HPolyhedron& p, const Vector& point) {
  if (!p.contains(point)) {
    throw Error(ErrorKind::InfeasiblePoint, "point is outside the polyhedron");
  }
  PolyhedralCone cone;
  cone.dim = p.dim;
  for (std::size_t i : p.active_rows(point)) cone.inequalities.push_back(p.A.row(i));
  for (std::size_t i = 0; i < p.Aeq.rows(); ++i) cone.equalities.push_back(p.Aeq.row(i));
  return cone;
}

// ---------------------------------------------------------------------------
// Simplex

namespace {

class Tableau {
 public:
  Tableau(std::vector<Vector> rows, std::size_t cols,
          std::vector<std::size_t> basis)
      : rows_(std::move(rows)), cols_(cols), basis_(std::move(basis)) {}

  enum class Outcome { Optimal, Unbounded };

  // Reduced costs for `cost` with respect to the current basis.
  void price(const Vector& cost) {
    reduced_ = Vector(cols_ + 1);
    for (std::size_t j = 0; j <= cols_; ++j) {
      Rational r = j < cols_ ? cost[j] : Rational(0);
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Rational& cb = cost[basis_[i]];
        if (!cb.is_zero() && !rows_[i][j].is_zero()) r -= cb * rows_[i][j];
      }
      reduced_[j] = r;
    }
  }

  Outcome run(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && reduced_[j].sign() < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return Outcome::Optimal;
      std::size_t leave = rows_.size();
      Rational best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][enter].sign() <= 0) continue;
        const Rational ratio = rows_[i][cols_] / rows_[i][enter];
        if (leave == rows_.size() || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows_.size()) return Outcome::Unbounded;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = Rational(1) / rows_[r][c];
    for (auto& e : rows_[r]) {
      if (!e.is_zero()) e *= inv;
    }
    auto eliminate = [&](Vector& row) {
      if (row[c].is_zero()) return;
      const Rational f = row[c];
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (!rows_[r][j].is_zero()) row[j] -= f * rows_[r][j];
      }
    };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    if (!reduced_.empty()) eliminate(reduced_);
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  std::size_t num_rows() const { return rows_.size(); }
  const Rational& at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  std::size_t basic(std::size_t i) const { return basis_[i]; }
  const Rational& rhs(std::size_t i) const { return rows_[i][cols_]; }
  Rational objective() const { return -reduced_[cols_]; }

  Vector solution() const {
    Vector x(cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i) x[basis_[i]] = rows_[i][cols_];
    return x;
  }

 private:
  std::vector<Vector> rows_;
  std::size_t cols_;
  std::vector<std::size_t> basis_;
  Vector reduced_;
};

LpResult lp_minimize(const Vector& c, const HPolyhedron& region) {
  const std::size_t d = region.dim;
  const std::size_t k = region.num_inequalities();
  const std::size_t e = region.num_equalities();
  const std::size_t m = k + e;
  // Columns: x+ (d), x- (d), slacks (k), artificials (m).
  const std::size_t structural = 2 * d + k;
  const std::size_t cols = structural + m;

  std::vector<Vector> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Vector row(cols + 1);
    const bool ineq = i < k;
    for (std::size_t j = 0; j < d; ++j) {
      const Rational& a = ineq ? region.A(i, j) : region.Aeq(i - k, j);
      row[j] = a;
      row[d + j] = -a;
    }
    if (ineq) row[2 * d + i] = 1;
    row[cols] = ineq ? region.b[i] : region.beq[i - k];
    if (row[cols].sign() < 0) {
      for (auto& v : row) v = -v;
    }
    row[structural + i] = 1;
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = structural + i;
  Tableau t(std::move(rows), cols, std::move(basis));

  // Phase I.
  Vector phase1(cols);
  for (std::size_t i = 0; i < m; ++i) phase1[structural + i] = 1;
  t.price(phase1);
  t.run(std::vector<bool>(cols, true));
  if (t.objective().sign() > 0) return LpInfeasible{};

  // Drive zero-level artificials out of the basis; rows that cannot be
  // pivoted are redundant.
  for (std::size_t i = 0; i < t.num_rows();) {
    if (t.basic(i) < structural) {
      ++i;
      continue;
    }
    std::size_t col = structural;
    for (std::size_t j = 0; j < structural; ++j) {
      if (!t.at(i, j).is_zero()) {
        col = j;
        break;
      }
    }
    if (col == structural) {
      t.drop_row(i);
    } else {
      t.pivot(i, col);
      ++i;
    }
  }

  // Phase II.
  Vector cost(cols);
  for (std::size_t j = 0; j < d; ++j) {
    cost[j] = c[j];
    cost[d + j] = -c[j];
  }
  std::vector<bool> allowed(cols, false);
  for (std::size_t j = 0; j < structural; ++j) allowed[j] = true;
  t.price(cost);
  if (t.run(allowed) == Tableau::Outcome::Unbounded) return LpUnbounded{};

  const Vector sol = t.solution();
  Vector x(d);
  for (std::size_t j = 0; j < d; ++j) x[j] = sol[j] - sol[d + j];
  return LpOptimal{dot(c, x), std::move(x)};
}

}  // namespace

LpResult lp_solve(const Vector& c, const HPolyhedron& region, Sense sense) {
  if (c.size() != region.dim || region.b.size() != region.A.rows() ||
      region.beq.size() != region.Aeq.rows() ||
      (region.A.rows() > 0 && region.A.cols() != region.dim) ||
      (region.Aeq.rows() > 0 && region.Aeq.cols() != region.dim)) {
    throw Error(ErrorKind::DimensionMismatch, "lp_solve dimensions");
  }
  if (sense == Sense::Minimize) return lp_minimize(c, region);
  LpResult r = lp_minimize(-c, region);
  if (auto* opt = std::get_if<LpOptimal>(&r)) opt->value = -opt->value;
  return r;
}

bool is_feasible(const HPolyhedron& region) {
  return !std::holds_alternative<LpInfeasible>(
      lp_solve(zeros(region.dim), region, Sense::Minimize));
}

std::optional<Vector> feasible_point(const HPolyhedron& region) {
  auto r = lp_solve(zeros(region.dim), region, Sense::Minimize);
  if (auto* opt = std::get_if<LpOptimal>(&r)) return opt->point;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Face enumeration for quadratic objectives

namespace {

// Calls fn(subset) for every subset of {0..n-1} with size <= max_size, by
// increasing size then lexicographically. Stops early when fn returns false.
void for_each_subset(std::size_t n, std::size_t max_size,
                     const std::function<bool(const IndexSet&)>& fn) {
  IndexSet cur;
  for (std::size_t size = 0; size <= std::min(n, max_size); ++size) {
    cur.resize(size);
    for (std::size_t i = 0; i < size; ++i) cur[i] = i;
    for (;;) {
      if (!fn(cur)) return;
      std::size_t i = size;
      while (i > 0 && cur[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++cur[i - 1];
      for (std::size_t j = i; j < size; ++j) cur[j] = cur[j - 1] + 1;
    }
  }
}

// Greedy linearly independent subset of the equality rows.
IndexSet independent_equalities(const HPolyhedron& c) {
  IndexSet keep;
  Matrix acc(0, c.dim);
  for (std::size_t i = 0; i < c.Aeq.rows(); ++i) {
    Matrix trial = acc;
    trial.append_row(c.Aeq.row(i));
    if (rank_of(trial) == trial.rows()) {
      acc = trial;
      keep.push_back(i);
    }
  }
  return keep;
}

struct FaceSystem {
  Matrix g;  // stacked constraint rows, equalities first
  Vector r;
};

void check_cap(const HPolyhedron& c, std::size_t cap) {
  if (c.num_inequalities() > cap) {
    throw Error(ErrorKind::EnumerationCapExceeded,
                std::to_string(c.num_inequalities()) +
                    " inequalities exceed the enumeration cap " +
                    std::to_string(cap));
  }
}

// Enumerates faces whose defining rows are linearly independent.
void for_each_face(const HPolyhedron& c,
                   const std::function<bool(const FaceSystem&,
                                            std::size_t)>& fn) {
  const IndexSet eqs = independent_equalities(c);
  const std::size_t free_dim = c.dim - eqs.size();
  for_each_subset(c.num_inequalities(), free_dim, [&](const IndexSet& w) {
    FaceSystem f{Matrix(0, c.dim), {}};
    for (std::size_t i : eqs) {
      f.g.append_row(c.Aeq.row(i));
      f.r.push_back(c.beq[i]);
    }
    for (std::size_t i : w) {
      f.g.append_row(c.A.row(i));
      f.r.push_back(c.b[i]);
    }
    if (rank_of(f.g) < f.g.rows()) return true;
    return fn(f, eqs.size());
  });
}

Rational half_sq_distance(const Vector& a, const Vector& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Rational d = a[i] - b[i];
    s += d * d;
  }
  return s / Rational(2);
}

}  // namespace

Vector project_polyhedron(const Vector& v, const HPolyhedron& c,
                          std::size_t cap) {
  if (v.size() != c.dim) {
    throw Error(ErrorKind::DimensionMismatch, "projection point dimension");
  }
  check_cap(c, cap);
  if (!is_feasible(c)) {
    throw Error(ErrorKind::EmptyPolyhedron, "cannot project onto empty set");
  }
  if (c.contains(v)) return v;
  std::optional<Vector> best;
  Rational best_obj;
  for_each_face(c, [&](const FaceSystem& f, std::size_t) {
    // y = v - G^T mu with G y = r  =>  (G G^T) mu = G v - r.
    const Matrix gt = f.g.transpose();
    const auto mu = solve_unique(f.g * gt, f.g * v - f.r);
    if (!mu) return true;
    Vector y = v - gt * *mu;
    if (!c.contains(y)) return true;
    const Rational obj = half_sq_distance(y, v);
    if (!best || obj < best_obj || (obj == best_obj && y < *best)) {
      best = std::move(y);
      best_obj = obj;
    }
    return true;
  });
  if (!best) {
    throw Error(ErrorKind::AssumptionViolation,
                "projection face enumeration found no candidate");
  }
  return *best;
}

std::optional<Vector> convex_qp_minimize(const Matrix& h_mat, const Vector& h,
                                         const HPolyhedron& region,
                                         std::size_t cap) {
  const std::size_t d = region.dim;
  if (h_mat.rows() != d || h_mat.cols() != d || h.size() != d) {
    throw Error(ErrorKind::DimensionMismatch, "QP objective dimensions");
  }
  check_cap(region, cap);
  std::optional<Vector> found;
  for_each_face(region, [&](const FaceSystem& f, std::size_t num_eq) {
    const std::size_t k = f.g.rows();
    Matrix kkt(d + k, d + k);
    Vector rhs(d + k);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) kkt(i, j) = h_mat(i, j);
      rhs[i] = -h[i];
    }
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t j = 0; j < d; ++j) {
        kkt(d + r, j) = f.g(r, j);
        kkt(j, d + r) = f.g(r, j);
      }
      rhs[d + r] = f.r[r];
    }
    const auto sol = solve_unique(kkt, rhs);
    if (!sol) return true;
    Vector z(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(d));
    if (!region.contains(z)) return true;
    for (std::size_t r = num_eq; r < k; ++r) {
      if ((*sol)[d + r].sign() < 0) return true;
    }
    found = std::move(z);
    return false;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Double description

std::vector<Vector> extreme_rays(const std::vector<Vector>& rows,
                                 std::size_t dim) {
  for (const auto& r : rows) {
    if (r.size() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "cone row length");
    }
  }
  if (dim == 0) return {};
  // Initial simplicial cone from a greedy independent row subset.
  IndexSet basis_rows;
  Matrix acc(0, dim);
  for (std::size_t i = 0; i < rows.size() && basis_rows.size() < dim; ++i) {
    Matrix trial = acc;
    trial.append_row(rows[i]);
    if (rank_of(trial) == trial.rows()) {
      acc = std::move(trial);
      basis_rows.push_back(i);
    }
  }
  if (basis_rows.size() < dim) {
    throw Error(ErrorKind::AssumptionViolation,
                "double description needs a pointed cone");
  }

  std::vector<bool> processed(rows.size(), false);
  for (std::size_t i : basis_rows) processed[i] = true;

  struct Ray {
    Vector v;
    std::vector<bool> zero;  // processed rows vanishing on v
  };
  auto zero_set = [&](const Vector& v) {
    std::vector<bool> z(rows.size(), false);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      z[i] = processed[i] && dot(rows[i], v).is_zero();
    }
    return z;
  };

  std::vector<Ray> rays;
  for (std::size_t j = 0; j < dim; ++j) {
    Vector rhs(dim);
    rhs[j] = -1;
    auto r = solve_unique(acc, rhs);
    Vector v = primitive_direction(*r);
    rays.push_back({v, zero_set(v)});
  }

  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (processed[a]) continue;
    const Vector& row = rows[a];
    std::vector<std::size_t> plus, minus;
    std::vector<Rational> val(rays.size());
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(row, rays[r].v);
      if (val[r].sign() > 0) plus.push_back(r);
      if (val[r].sign() < 0) minus.push_back(r);
    }
    std::vector<Vector> fresh;
    for (std::size_t p : plus) {
      for (std::size_t q : minus) {
        std::vector<bool> common(rows.size());
        std::size_t count = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          common[i] = rays[p].zero[i] && rays[q].zero[i];
          count += common[i];
        }
        if (count + 2 < dim) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == p || o == q) continue;
          bool contains = true;
          for (std::size_t i = 0; i < rows.size() && contains; ++i) {
            if (common[i] && !rays[o].zero[i]) contains = false;
          }
          if (contains) adjacent = false;
        }
        if (!adjacent) continue;
        Vector nv = val[p] * rays[q].v - val[q] * rays[p].v;
        if (!is_zero(nv)) fresh.push_back(primitive_direction(nv));
      }
    }
    processed[a] = true;
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (val[r].sign() <= 0) next.push_back({rays[r].v, zero_set(rays[r].v)});
    }
    for (auto& v : fresh) next.push_back({v, zero_set(v)});
    rays = std::move(next);
  }

  std::set<Vector> unique;
  for (auto& r : rays) unique.insert(r.v);
  return {unique.begin(), unique.end()};
}

std::vector<Vector> vertex_enumeration(const HPolyhedron& polytope) {
  const std::size_t d = polytope.dim;
  for (std::size_t j = 0; j < d; ++j) {
    for (Sense s : {Sense::Minimize, Sense::Maximize}) {
      const LpResult r = lp_solve(unit_vector(d, j), polytope, s);
      if (std::holds_alternative<LpInfeasible>(r)) return {};
      if (std::holds_alternative<LpUnbounded>(r)) {
        throw Error(ErrorKind::UnboundedPolytope,
                    "polyhedron is unbounded along coordinate " +
                        std::to_string(j + 1));
      }
    }
  }
  if (!is_feasible(polytope)) return {};

  // Homogenize: (x, t) with A x - b t <= 0, Aeq x - beq t = 0, t >= 0.
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < polytope.A.rows(); ++i) {
    Vector r = polytope.A.row(i);
    r.push_back(-polytope.b[i]);
    rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < polytope.Aeq.rows(); ++i) {
    Vector r = polytope.Aeq.row(i);
    r.push_back(-polytope.beq[i]);
    rows.push_back(-r);
    rows.push_back(std::move(r));
  }
  Vector t_row(d + 1);
  t_row[d] = -1;
  rows.push_back(t_row);

  std::set<Vector> vertices;
  for (const auto& ray : extreme_rays(rows, d + 1)) {
    if (ray[d].sign() <= 0) continue;
    Vector x(ray.begin(), ray.begin() + static_cast<std::ptrdiff_t>(d));
    vertices.insert(Rational(1) / ray[d] * x);
  }
  return {vertices.begin(), vertices.end()};
}

std::vector<Vector> ConeGenerators::all() const {
  std::set<Vector> out(rays.begin(), rays.end());
  for (const auto& l : lineality) {
    out.insert(primitive_direction(l));
    out.insert(primitive_direction(-l));
  }
  return {out.begin(), out.end()};
}

ConeGenerators cone_generators(const PolyhedralCone& cone) {
  const std::size_t d = cone.dim;
  Matrix all(0, d);
  for (const auto& r : cone.inequalities) all.append_row(r);
  for (const auto& r : cone.equalities) all.append_row(r);
  ConeGenerators gens;
  for (auto& l : null_space(all, d)) gens.lineality.push_back(primitive_direction(l));

  std::vector<Vector> rows = cone.inequalities;
  for (const auto& e : cone.equalities) {
    rows.push_back(e);
    rows.push_back(-e);
  }
  for (const auto& l : gens.lineality) {
    rows.push_back(l);
    rows.push_back(-l);
  }
  if (d > 0) gens.rays = extreme_rays(rows, d);
  return gens;
}

}  // namespace mpeckit
