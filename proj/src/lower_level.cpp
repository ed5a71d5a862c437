#include "mpeckit/lower_level.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mpeckit/error.hpp"

namespace mpeckit {

Matrix LocalModel::grad_y_lagrangian(const Vector& lambda) const {
  Matrix out = Fy;
  for (std::size_t i = 0; i < Hyy.size(); ++i) {
    if (!lambda.at(i).is_zero()) out = out + lambda[i] * Hyy[i];
  }
  return out;
}

Matrix LocalModel::grad_x_lagrangian(const Vector& lambda) const {
  Matrix out = Fx;
  for (std::size_t i = 0; i < Hyx.size(); ++i) {
    if (!lambda.at(i).is_zero()) out = out + lambda[i] * Hyx[i];
  }
  return out;
}

LocalModel local_model(const MpecInstance& inst, const Point& p) {
  inst.check_point(p);
  const std::size_t n = inst.n(), m = inst.m(), ell = inst.ell();
  const Vector z = p.z();
  LocalModel lm;
  lm.F = Vector(m);
  lm.Fx = Matrix(m, n);
  lm.Fy = Matrix(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const Polynomial& f = inst.F()[j];
    lm.F[j] = f.evaluate(z);
    for (std::size_t k = 0; k < n; ++k) lm.Fx(j, k) = f.derivative(k).evaluate(z);
    for (std::size_t k = 0; k < m; ++k) lm.Fy(j, k) = f.derivative(n + k).evaluate(z);
  }
  lm.g = Vector(ell);
  lm.Gx = Matrix(ell, n);
  lm.Gy = Matrix(ell, m);
  for (std::size_t i = 0; i < ell; ++i) {
    const Polynomial& g = inst.g()[i];
    lm.g[i] = g.evaluate(z);
    if (lm.g[i].is_zero()) lm.active.push_back(i);
    for (std::size_t k = 0; k < n; ++k) lm.Gx(i, k) = g.derivative(k).evaluate(z);
    Matrix hyy(m, m), hyx(m, n);
    for (std::size_t a = 0; a < m; ++a) {
      const Polynomial dga = g.derivative(n + a);
      lm.Gy(i, a) = dga.evaluate(z);
      for (std::size_t b = 0; b < m; ++b) hyy(a, b) = dga.derivative(n + b).evaluate(z);
      for (std::size_t k = 0; k < n; ++k) hyx(a, k) = dga.derivative(k).evaluate(z);
    }
    lm.Hyy.push_back(std::move(hyy));
    lm.Hyx.push_back(std::move(hyx));
  }
  lm.grad_f = Vector(n + m);
  for (std::size_t k = 0; k < n + m; ++k) {
    lm.grad_f[k] = inst.objective().derivative(k).evaluate(z);
  }
  return lm;
}

// ---------------------------------------------------------------------------
// Pattern enumeration

namespace {

void check_enumeration_cap(std::size_t k, std::size_t cap) {
  if (k > cap || k >= 63) {
    throw Error(ErrorKind::EnumerationCapExceeded,
                std::to_string(k) + " complementarity rows exceed the cap " +
                    std::to_string(cap));
  }
}

}  // namespace

AviResult solve_avi_system(const AviProblem& pr, std::size_t cap) {
  const std::size_t m = pr.M.cols();
  const std::size_t k = pr.Ein.rows();
  const std::size_t e = pr.Eeq.rows();
  if (pr.M.rows() != m || pr.c.size() != m || pr.bin.size() != k ||
      pr.beq.size() != e || (k > 0 && pr.Ein.cols() != m) ||
      (e > 0 && pr.Eeq.cols() != m)) {
    throw Error(ErrorKind::DimensionMismatch, "AVI problem dimensions");
  }
  check_enumeration_cap(k, cap);

  std::map<Vector, AviSolution> found;
  AviResult result;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    IndexSet act, rest;
    for (std::size_t i = 0; i < k; ++i) {
      ((mask >> i) & 1u ? act : rest).push_back(i);
    }
    const std::size_t a = act.size();
    const std::size_t u = m + a + e;
    Matrix sys(0, u);
    Vector rhs;
    for (std::size_t r = 0; r < m; ++r) {
      Vector row(u);
      for (std::size_t j = 0; j < m; ++j) row[j] = pr.M(r, j);
      for (std::size_t t = 0; t < a; ++t) row[m + t] = pr.Ein(act[t], r);
      for (std::size_t t = 0; t < e; ++t) row[m + a + t] = pr.Eeq(t, r);
      sys.append_row(row);
      rhs.push_back(-pr.c[r]);
    }
    auto y_row = [&](const Matrix& src, std::size_t i) {
      Vector row(u);
      for (std::size_t j = 0; j < m; ++j) row[j] = src(i, j);
      return row;
    };
    for (std::size_t i : act) {
      sys.append_row(y_row(pr.Ein, i));
      rhs.push_back(-pr.bin[i]);
    }
    for (std::size_t t = 0; t < e; ++t) {
      sys.append_row(y_row(pr.Eeq, t));
      rhs.push_back(-pr.beq[t]);
    }
    const auto sol = solve_linear(sys, rhs);
    if (!sol) continue;

    // Sign conditions: -mu_A <= 0 and Ein_rest y <= -bin_rest.
    HPolyhedron region(u);
    for (std::size_t t = 0; t < a; ++t) region.add_inequality(-unit_vector(u, m + t), 0);
    for (std::size_t i : rest) region.add_inequality(y_row(pr.Ein, i), -pr.bin[i]);

    Vector point;
    if (sol->null_basis.empty()) {
      if (!region.contains(sol->particular)) continue;
      point = sol->particular;
    } else {
      for (std::size_t r = 0; r < sys.rows(); ++r) region.add_equality(sys.row(r), rhs[r]);
      auto fp = feasible_point(region);
      if (!fp) continue;
      point = std::move(*fp);
      bool y_unique = true;
      for (std::size_t j = 0; j < m && y_unique; ++j) {
        for (Sense s : {Sense::Minimize, Sense::Maximize}) {
          const LpResult r = lp_solve(unit_vector(u, j), region, s);
          const auto* opt = std::get_if<LpOptimal>(&r);
          if (!opt || opt->value != point[j]) {
            y_unique = false;
            break;
          }
        }
      }
      if (!y_unique) {
        AviContinuum cont;
        cont.particular = Vector(point.begin(), point.begin() + static_cast<std::ptrdiff_t>(m));
        std::set<Vector> dirs;
        for (const auto& nb : sol->null_basis) {
          Vector d(nb.begin(), nb.begin() + static_cast<std::ptrdiff_t>(m));
          if (!is_zero(d)) dirs.insert(primitive_direction(d));
        }
        cont.directions.assign(dirs.begin(), dirs.end());
        cont.pattern = act;
        result.continua.push_back(std::move(cont));
        result.exhaustive = false;
        continue;
      }
    }
    Vector y(point.begin(), point.begin() + static_cast<std::ptrdiff_t>(m));
    if (found.count(y)) continue;
    AviSolution s;
    s.mu = Vector(k);
    for (std::size_t t = 0; t < a; ++t) s.mu[act[t]] = point[m + t];
    s.nu = Vector(point.begin() + static_cast<std::ptrdiff_t>(m + a), point.end());
    const Vector slack = pr.Ein * y + pr.bin;
    for (std::size_t i = 0; i < k; ++i) {
      if (slack[i].is_zero()) s.active.push_back(i);
    }
    s.y = y;
    found.emplace(std::move(y), std::move(s));
  }
  for (auto& [y, s] : found) result.solutions.push_back(std::move(s));
  return result;
}

// ---------------------------------------------------------------------------
// Roots of quadratics

RootSet real_roots(const std::vector<Rational>& coeffs_in) {
  std::vector<Rational> c = coeffs_in;
  while (!c.empty() && c.back().is_zero()) c.pop_back();
  RootSet out;
  if (c.size() <= 1) return out;
  if (c.size() == 2) {
    out.exact.push_back(-c[0] / c[1]);
    return out;
  }
  if (c.size() > 3) {
    throw Error(ErrorKind::Unsupported, "root finding beyond degree 2");
  }
  const Rational disc = c[1] * c[1] - Rational(4) * c[2] * c[0];
  if (disc.sign() < 0) return out;
  const Rational two_a = Rational(2) * c[2];
  if (disc.is_zero()) {
    out.exact.push_back(-c[1] / two_a);
    return out;
  }
  const mpz_class p = disc.numerator();
  const mpz_class q = disc.denominator();
  if (mpz_perfect_square_p(p.get_mpz_t()) && mpz_perfect_square_p(q.get_mpz_t())) {
    const Rational s(mpq_class(sqrt(p), sqrt(q)));
    Rational r1 = (-c[1] - s) / two_a;
    Rational r2 = (-c[1] + s) / two_a;
    if (r2 < r1) std::swap(r1, r2);
    out.exact = {r1, r2};
    return out;
  }
  // sqrt(p/q) = sqrt(p q) / q, enclosed at 2^-40 relative resolution.
  const unsigned bits = 40;
  mpz_class scale = 1;
  scale <<= bits;
  const mpz_class root = sqrt(mpz_class(p * q * scale * scale));
  const Rational lo(mpq_class(root, q * scale));
  const Rational hi(mpq_class(root + 1, q * scale));
  for (int sgn : {-1, 1}) {
    Rational e1 = (-c[1] + Rational(sgn) * lo) / two_a;
    Rational e2 = (-c[1] + Rational(sgn) * hi) / two_a;
    if (e2 < e1) std::swap(e1, e2);
    out.enclosures.emplace_back(e1, e2);
  }
  std::sort(out.enclosures.begin(), out.enclosures.end());
  return out;
}

// ---------------------------------------------------------------------------
// Lower-level sets and solvers

HPolyhedron lower_feasible_set(const MpecInstance& inst, const Vector& x) {
  const std::size_t m = inst.m();
  if (x.size() != inst.n()) {
    throw Error(ErrorKind::DimensionMismatch, "x has wrong dimension");
  }
  HPolyhedron c(m);
  for (std::size_t i = 0; i < inst.ell(); ++i) {
    const Polynomial r = restrict_to_y(inst.g()[i], x, m);
    if (r.total_degree() <= 1) {
      auto [a, c0] = r.affine_parts();
      c.add_inequality(a, -c0);
      continue;
    }
    if (m != 1) {
      throw Error(ErrorKind::Unsupported,
                  "g_" + std::to_string(i + 1) +
                      " is nonlinear in y and m > 1; C(x) is not polyhedral");
    }
    const auto coeffs = r.univariate_coefficients(0, Vector{0});
    if (coeffs[2].sign() < 0) {
      throw Error(ErrorKind::Unsupported,
                  "g_" + std::to_string(i + 1) + " is nonconvex in y");
    }
    const RootSet roots = real_roots(coeffs);
    if (!roots.enclosures.empty()) {
      throw Error(ErrorKind::Unsupported,
                  "g_" + std::to_string(i + 1) + " has irrational roots at this x");
    }
    if (roots.exact.empty()) {
      c.add_inequality({Rational(0)}, -1);
    } else {
      c.add_inequality({Rational(1)}, roots.exact.back());
      c.add_inequality({Rational(-1)}, -roots.exact.front());
    }
  }
  return c;
}

namespace {

bool lower_set_empty(const MpecInstance& inst, const Vector& x) {
  try {
    return !is_feasible(lower_feasible_set(inst, x));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Unsupported) return false;
    throw;
  }
}

[[noreturn]] void throw_empty(const Vector& x) {
  throw Error(ErrorKind::EmptyLowerFeasibleSet, "C(x) is empty at x = " + to_string(x));
}

}  // namespace

ViSolutionSet solve_avi(const MpecInstance& inst, const Vector& x,
                        std::size_t cap) {
  const AffineVi& a = inst.affine();
  if (x.size() != inst.n()) {
    throw Error(ErrorKind::DimensionMismatch, "x has wrong dimension");
  }
  check_enumeration_cap(inst.ell(), cap);
  if (lower_set_empty(inst, x)) throw_empty(x);
  AviProblem pr;
  pr.M = a.Q;
  pr.c = a.P * x + a.q;
  pr.Ein = a.E;
  pr.bin = a.D * x + a.b;
  pr.Eeq = Matrix(0, inst.m());
  const AviResult r = solve_avi_system(pr, cap);
  ViSolutionSet out;
  for (const auto& s : r.solutions) out.solutions.push_back({s.y, s.active, s.mu});
  out.continua = r.continua;
  out.exhaustive = r.exhaustive;
  return out;
}

ViSolutionSet solve_polynomial_vi(const MpecInstance& inst, const Vector& x) {
  if (inst.m() != 1) {
    throw Error(ErrorKind::UnsupportedDimension,
                "polynomial lower level requires m = 1, got m = " +
                    std::to_string(inst.m()));
  }
  if (x.size() != inst.n()) {
    throw Error(ErrorKind::DimensionMismatch, "x has wrong dimension");
  }
  if (lower_set_empty(inst, x)) throw_empty(x);
  const Polynomial fr = restrict_to_y(inst.F()[0], x, 1);
  if (fr.is_zero()) {
    throw Error(ErrorKind::Unsupported,
                "F(x,.) vanishes identically; every point of C(x) solves the VI");
  }
  if (fr.degree_in(0) > 2) {
    throw Error(ErrorKind::DegreeTooHigh, "F(x,.) has degree > 2 in y");
  }
  ViSolutionSet out;
  out.exhaustive = false;
  std::set<Rational> candidates;
  auto collect = [&](const Polynomial& p, const std::string& src) {
    if (p.is_zero()) return;
    const RootSet roots = real_roots(p.univariate_coefficients(0, Vector{0}));
    candidates.insert(roots.exact.begin(), roots.exact.end());
    for (const auto& [lo, hi] : roots.enclosures) {
      out.irrational.push_back({lo, hi, src});
    }
  };
  collect(fr, "F");
  for (std::size_t i = 0; i < inst.ell(); ++i) {
    collect(restrict_to_y(inst.g()[i], x, 1), "g_" + std::to_string(i + 1));
  }
  const std::size_t ell = inst.ell();
  for (const auto& yv : candidates) {
    const Point p{x, Vector{yv}};
    const LocalModel lm = local_model(inst, p);
    if (std::any_of(lm.g.begin(), lm.g.end(), [](const Rational& v) { return v.sign() > 0; })) {
      continue;
    }
    HPolyhedron mult(ell);
    for (std::size_t i = 0; i < ell; ++i) {
      if (std::binary_search(lm.active.begin(), lm.active.end(), i)) {
        mult.add_inequality(-unit_vector(ell, i), 0);
      } else {
        mult.add_equality(unit_vector(ell, i), 0);
      }
    }
    mult.add_equality(lm.Gy.col(0), -lm.F[0]);
    auto lambda = feasible_point(mult);
    if (!lambda) continue;
    out.solutions.push_back({p.y, lm.active, *lambda});
  }
  return out;
}

ViSolutionSet solve_lower(const MpecInstance& inst, const Vector& x,
                          std::size_t cap) {
  return inst.is_affine() ? solve_avi(inst, x, cap) : solve_polynomial_vi(inst, x);
}

KktReport check_kkt(const MpecInstance& inst, const Vector& x, const Vector& y,
                    const Vector& lambda) {
  if (lambda.size() != inst.ell()) {
    throw Error(ErrorKind::DimensionMismatch,
                "lambda has length " + std::to_string(lambda.size()) +
                    ", expected ell = " + std::to_string(inst.ell()));
  }
  const LocalModel lm = local_model(inst, Point{x, y});
  KktReport rep;
  for (std::size_t j = 0; j < inst.m(); ++j) {
    Rational r = lm.F[j];
    for (std::size_t i = 0; i < inst.ell(); ++i) r += lambda[i] * lm.Gy(i, j);
    if (!r.is_zero()) rep.violations.push_back({"stationarity", j, r});
  }
  for (std::size_t i = 0; i < inst.ell(); ++i) {
    if (lambda[i].sign() < 0) rep.violations.push_back({"sign", i, lambda[i]});
  }
  for (std::size_t i = 0; i < inst.ell(); ++i) {
    if (lm.g[i].sign() > 0) rep.violations.push_back({"feasibility", i, lm.g[i]});
  }
  for (std::size_t i = 0; i < inst.ell(); ++i) {
    const Rational prod = lambda[i] * lm.g[i];
    if (!prod.is_zero()) rep.violations.push_back({"complementarity", i, prod});
  }
  return rep;
}

NormalMapPoint normal_map_eval(const MpecInstance& inst, const Vector& x,
                               const Vector& v, std::size_t cap) {
  if (v.size() != inst.m()) {
    throw Error(ErrorKind::DimensionMismatch, "v has wrong dimension");
  }
  const HPolyhedron c = lower_feasible_set(inst, x);
  if (!is_feasible(c)) throw_empty(x);
  NormalMapPoint out;
  out.x = x;
  out.v = v;
  out.y = project_polyhedron(v, c, cap);
  const Vector z = concat(x, out.y);
  out.H = Vector(inst.m());
  for (std::size_t j = 0; j < inst.m(); ++j) {
    out.H[j] = inst.F()[j].evaluate(z) + v[j] - out.y[j];
  }
  out.is_zero = is_zero(out.H);
  return out;
}

ImplicitMapTable sample_implicit_map(const MpecInstance& inst,
                                     const std::vector<Vector>& grid,
                                     std::size_t cap) {
  ImplicitMapTable table;
  for (const auto& x : grid) {
    const ViSolutionSet s = solve_lower(inst, x, cap);
    ImplicitMapSample row;
    row.x = x;
    row.count = s.solutions.size();
    row.exhaustive = s.exhaustive && s.continua.empty();
    if (row.count == 1 && s.continua.empty() && s.irrational.empty()) {
      row.y = s.solutions.front().y;
    }
    table.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < table.rows.size();) {
    if (!table.rows[i].y) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < table.rows.size() && table.rows[j + 1].y) ++j;
    table.single_valued_runs.emplace_back(i, j);
    i = j + 1;
  }
  return table;
}

}  // namespace mpeckit
