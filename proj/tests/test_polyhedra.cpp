#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "mpeckit/error.hpp"
#include "mpeckit/polyhedra.hpp"

using namespace mpeckit;

namespace {

Rational rnd(std::mt19937& gen, int lo, int hi) {
  return Rational(std::uniform_int_distribution<int>(lo, hi)(gen));
}

HPolyhedron box(std::size_t d, const Rational& lo, const Rational& hi) {
  HPolyhedron p(d);
  for (std::size_t j = 0; j < d; ++j) {
    p.add_inequality(unit_vector(d, j), hi);
    p.add_inequality(-unit_vector(d, j), -lo);
  }
  return p;
}

LpOptimal optimal(const LpResult& r) {
  REQUIRE(std::holds_alternative<LpOptimal>(r));
  return std::get<LpOptimal>(r);
}

// All basic feasible solutions by brute force over d-subsets of rows.
std::set<Vector> bfs_oracle(const HPolyhedron& p) {
  std::set<Vector> out;
  const std::size_t k = p.num_inequalities();
  const std::size_t d = p.dim;
  std::vector<bool> pick(k, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(d), true);
  do {
    Matrix a(0, d);
    Vector b;
    for (std::size_t i = 0; i < k; ++i) {
      if (!pick[i]) continue;
      a.append_row(p.A.row(i));
      b.push_back(p.b[i]);
    }
    auto v = solve_unique(a, b);
    if (v && p.contains(*v)) out.insert(*v);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

double dist2(const Vector& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i].to_double() - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

TEST_CASE("lp_solve handles the three outcomes") {
  HPolyhedron half(1);
  half.add_inequality({Rational(-1)}, 0);
  const auto opt = optimal(lp_solve({Rational(1)}, half, Sense::Minimize));
  CHECK(opt.value == 0);
  CHECK(opt.point == Vector{0});

  HPolyhedron empty = half;
  empty.add_inequality({Rational(1)}, -1);
  CHECK(std::holds_alternative<LpInfeasible>(
      lp_solve({Rational(0)}, empty, Sense::Minimize)));

  CHECK(std::holds_alternative<LpUnbounded>(
      lp_solve({Rational(-1)}, half, Sense::Minimize)));
}

TEST_CASE("lp_solve maximizes and copes with equalities and empty rows") {
  HPolyhedron p = box(2, 0, 3);
  p.add_equality({Rational(1), Rational(1)}, 4);
  const auto& opt =
      optimal(lp_solve({Rational(2), Rational(1)}, p, Sense::Maximize));
  CHECK(opt.value == 7);
  CHECK(opt.point == Vector{3, 1});

  HPolyhedron free(2);
  CHECK(std::holds_alternative<LpOptimal>(
      lp_solve(zeros(2), free, Sense::Minimize)));
  CHECK(std::holds_alternative<LpUnbounded>(
      lp_solve({Rational(1), Rational(0)}, free, Sense::Minimize)));

  HPolyhedron zero_dim(0);
  CHECK(is_feasible(zero_dim));

  // Redundant equalities are dropped after phase I.
  HPolyhedron red(2);
  red.add_equality({Rational(1), Rational(1)}, 1);
  red.add_equality({Rational(2), Rational(2)}, 2);
  red.add_inequality({Rational(-1), Rational(0)}, 0);
  red.add_inequality({Rational(0), Rational(-1)}, 0);
  CHECK(optimal(lp_solve({Rational(1), Rational(0)}, red, Sense::Minimize))
            .point == Vector{0, 1});

  CHECK_THROWS_AS(lp_solve({Rational(1)}, red, Sense::Minimize), Error);
}

TEST_CASE("lp strong duality on random bounded LPs") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const std::size_t rows = 2 + static_cast<std::size_t>(trial % 4);
    HPolyhedron p = box(d, -5, 5);
    Vector x0(d);
    for (auto& v : x0) v = rnd(gen, -3, 3);
    for (std::size_t i = 0; i < rows; ++i) {
      Vector a(d);
      for (auto& v : a) v = rnd(gen, -4, 4);
      p.add_inequality(a, dot(a, x0) + rnd(gen, 0, 3));
    }
    Vector c(d);
    for (auto& v : c) v = rnd(gen, -5, 5);
    const auto primal = optimal(lp_solve(c, p, Sense::Minimize));
    CHECK(p.contains(primal.point));

    // max -b^T u  s.t.  A^T u = -c, u >= 0.
    const std::size_t k = p.num_inequalities();
    HPolyhedron dual(k);
    for (std::size_t i = 0; i < k; ++i) dual.add_inequality(-unit_vector(k, i), 0);
    for (std::size_t j = 0; j < d; ++j) dual.add_equality(p.A.col(j), -c[j]);
    const auto dopt = optimal(lp_solve(-p.b, dual, Sense::Maximize));
    CHECK(primal.value == dopt.value);
  }
}

TEST_CASE("projection examples") {
  HPolyhedron half(1);
  half.add_inequality({Rational(-1)}, 0);
  CHECK(project_polyhedron({Rational(-2)}, half) == Vector{0});
  CHECK(project_polyhedron({Rational(2), Rational(-1)}, box(2, 0, 1)) ==
        Vector{1, 0});

  HPolyhedron empty = half;
  empty.add_inequality({Rational(1)}, -1);
  CHECK_THROWS_AS(project_polyhedron({Rational(0)}, empty), Error);
  try {
    project_polyhedron({Rational(0)}, empty);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyPolyhedron);
  }

  HPolyhedron many = box(1, 0, 1);
  for (int i = 0; i < 4; ++i) many.add_inequality({Rational(1)}, 2 + i);
  CHECK_THROWS_AS(project_polyhedron({Rational(0)}, many, 5), Error);

  // Projection onto a line in the plane.
  HPolyhedron line(2);
  line.add_equality({Rational(1), Rational(1)}, 1);
  CHECK(project_polyhedron({Rational(1), Rational(1)}, line) ==
        Vector{Rational(1, 2), Rational(1, 2)});
}

TEST_CASE("projection agrees with a grid-search oracle") {
  std::mt19937 gen(5);
  const double step = 1.0 / 64;
  std::vector<std::pair<Vector, Vector>> samples;
  for (int trial = 0; trial < 20; ++trial) {
    // Random halfspaces that keep the disc of radius 1/2 around c inside C.
    HPolyhedron c = box(2, -2, 2);
    const Vector center{rnd(gen, -1, 1), rnd(gen, -1, 1)};
    const int extra = 1 + trial % 4;
    for (int i = 0; i < extra; ++i) {
      Vector a{rnd(gen, -3, 3), rnd(gen, -3, 3)};
      if (is_zero(a)) a[0] = 1;
      c.add_inequality(a, dot(a, center) + norm1(a) / Rational(2));
    }
    const Vector v{rnd(gen, -12, 12) / Rational(4), rnd(gen, -12, 12) / Rational(4)};
    const Vector y = project_polyhedron(v, c);
    REQUIRE(c.contains(y));

    double best = 1e300;
    std::vector<double> vd{v[0].to_double(), v[1].to_double()};
    for (int i = 0; i <= 256; ++i) {
      for (int j = 0; j <= 256; ++j) {
        const Vector g{Rational(-128 + i, 64), Rational(-128 + j, 64)};
        if (!c.contains(g)) continue;
        best = std::min(best, dist2(g, vd));
      }
    }
    const double exact = std::sqrt(dist2(y, vd));
    CHECK(std::sqrt(best) >= exact - 1e-12);
    CHECK(std::sqrt(best) - exact <= 12 * step);

    for (const auto& w : vertex_enumeration(c)) {
      CHECK(dot(w - y, v - y) <= 0);
    }
    samples.emplace_back(v, y);
    if (samples.size() >= 2) {
      // Nonexpansiveness against the previous point on the same set.
      const Vector& v1 = samples[samples.size() - 2].first;
      const Vector y1 = project_polyhedron(v1, c);
      const Vector dy = y - y1;
      const Vector dv = v - v1;
      CHECK(dot(dy, dy) <= dot(dv, dv));
    }
  }
}

TEST_CASE("convex QP over a polyhedron") {
  // min 1/2|z|^2 - (3,1)^T z over the unit box: optimum (1,1).
  const auto z = convex_qp_minimize(Matrix::identity(2), {Rational(-3), Rational(-1)},
                                    box(2, 0, 1));
  REQUIRE(z);
  CHECK(*z == Vector{1, 1});
  // Linear objective over a half-line is unbounded: no certified face.
  HPolyhedron half(1);
  half.add_inequality({Rational(-1)}, 0);
  CHECK_FALSE(convex_qp_minimize(Matrix(1, 1), {Rational(-1)}, half));
  CHECK(*convex_qp_minimize(Matrix(1, 1), {Rational(1)}, half) == Vector{0});
}

TEST_CASE("vertex enumeration examples") {
  CHECK(vertex_enumeration(box(2, 0, 1)).size() == 4);

  HPolyhedron simplex(3);
  for (std::size_t j = 0; j < 3; ++j) simplex.add_inequality(-unit_vector(3, j), 0);
  simplex.add_inequality({Rational(1), Rational(1), Rational(1)}, 1);
  const auto v = vertex_enumeration(simplex);
  CHECK(v == std::vector<Vector>{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}});

  HPolyhedron half(1);
  half.add_inequality({Rational(-1)}, 0);
  CHECK_THROWS_AS(vertex_enumeration(half), Error);

  HPolyhedron empty = box(1, 0, 1);
  empty.add_inequality({Rational(1)}, -1);
  CHECK(vertex_enumeration(empty).empty());

  // Segment in the plane given by an equality.
  HPolyhedron seg = box(2, 0, 1);
  seg.add_equality({Rational(1), Rational(1)}, 1);
  CHECK(vertex_enumeration(seg) == std::vector<Vector>{{0, 1}, {1, 0}});

  // A single point.
  HPolyhedron pt(2);
  pt.add_equality({Rational(1), Rational(0)}, 2);
  pt.add_equality({Rational(0), Rational(1)}, -1);
  CHECK(vertex_enumeration(pt) == std::vector<Vector>{{2, -1}});
}

TEST_CASE("vertex enumeration matches subset enumeration") {
  std::mt19937 gen(23);
  int tested = 0;
  for (int trial = 0; tested < 60 && trial < 1000; ++trial) {
    const std::size_t d = 2 + trial % 2;
    HPolyhedron p(d);
    const std::size_t rows = d + 1 + static_cast<std::size_t>(trial % (6 - d));
    for (std::size_t i = 0; i < rows; ++i) {
      Vector a(d);
      for (auto& e : a) e = rnd(gen, -3, 3);
      p.add_inequality(a, rnd(gen, 0, 4));
    }
    std::vector<Vector> verts;
    try {
      verts = vertex_enumeration(p);
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::UnboundedPolytope);
      continue;
    }
    ++tested;
    const auto oracle = bfs_oracle(p);
    CHECK(std::set<Vector>(verts.begin(), verts.end()) == oracle);
    CHECK(std::is_sorted(verts.begin(), verts.end()));
    for (const auto& w : verts) {
      CHECK(rank_of(p.A.select_rows(p.active_rows(w))) == d);
    }
  }
  CHECK(tested >= 30);
}

TEST_CASE("rank and determinant sign") {
  CHECK(rank_of(Matrix::identity(3)) == 3);
  CHECK(det_sign(Matrix::identity(3)) == 1);
  CHECK(det_sign(Matrix::from_rows({{1, -1}, {1, 0}}, 2)) == 1);
  const Matrix outer = Matrix::from_rows({{1, 2, 3}, {2, 4, 6}, {-1, -2, -3}}, 3);
  CHECK(rank_of(outer) == 1);
  CHECK(det_sign(outer) == 0);
  CHECK(det_sign(Matrix(0, 0)) == 1);
  CHECK(det_sign(Matrix::from_rows({{0, 1}, {1, 0}}, 2)) == -1);
  CHECK_THROWS_AS(det_sign(Matrix(2, 3)), Error);
}

TEST_CASE("cone generators and tangent cones") {
  PolyhedralCone orthant{2, {{-1, 0}, {0, -1}}, {}};
  const auto g = cone_generators(orthant);
  CHECK(g.rays == std::vector<Vector>{{0, 1}, {1, 0}});
  CHECK(g.lineality.empty());

  PolyhedralCone half{2, {{0, -1}}, {}};
  const auto h = cone_generators(half);
  CHECK(h.all() == std::vector<Vector>{{-1, 0}, {0, 1}, {1, 0}});

  PolyhedralCone ray{2, {{-1, 0}}, {{1, 1}}};
  CHECK(cone_generators(ray).all() == std::vector<Vector>{{1, -1}});

  PolyhedralCone origin{2, {}, {{1, 0}, {0, 1}}};
  CHECK(cone_generators(origin).all().empty());

  // Pointed cone in R^3 with four facets (square pyramid).
  const auto rays = extreme_rays(
      {{1, 0, -1}, {-1, 0, -1}, {0, 1, -1}, {0, -1, -1}}, 3);
  CHECK(rays == std::vector<Vector>{{-1, -1, 1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, 1}});

  const HPolyhedron b = box(2, 0, 1);
  const auto t = tangent_cone(b, {Rational(0), Rational(1, 2)});
  CHECK(cone_generators(t).all() == std::vector<Vector>{{0, -1}, {0, 1}, {1, 0}});
  CHECK_THROWS_AS(tangent_cone(b, {Rational(2), Rational(0)}), Error);
}
