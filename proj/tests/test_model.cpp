#include <doctest.h>

#include <cmath>
#include <random>

#include "mpeckit/error.hpp"
#include "support.hpp"

using namespace mpeckit;
using namespace testsupport;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Parse;
}

const char* kAffine = R"({
  "name": "t", "n": 1, "m": 1, "ell": 1,
  "objective": [{"coef": "1", "powers": [1, 1]}],
  "lower_level": {"type": "affine", "P": [["1"]], "Q": [["1"]], "q": ["-1"],
                  "D": [["0"]], "E": [["-1"]], "b": ["0"]}
})";

double eval_d(const Polynomial& p, const std::vector<double>& z) {
  double s = 0;
  for (const auto& [e, c] : p.terms()) {
    double t = c.to_double();
    for (std::size_t k = 0; k < e.size(); ++k) t *= std::pow(z[k], e[k]);
    s += t;
  }
  return s;
}

Polynomial random_quadratic(std::mt19937& gen, std::size_t vars) {
  Polynomial p(vars);
  for (std::size_t i = 0; i < vars; ++i) {
    Exponents e(vars, 0);
    e[i] = 1;
    p.add_term(Rational(std::uniform_int_distribution<int>(-5, 5)(gen), 3), e);
    for (std::size_t j = i; j < vars; ++j) {
      Exponents f(vars, 0);
      ++f[i];
      ++f[j];
      p.add_term(Rational(std::uniform_int_distribution<int>(-5, 5)(gen), 2), f);
    }
  }
  p.add_term(Rational(std::uniform_int_distribution<int>(-5, 5)(gen)), Exponents(vars, 0));
  return p;
}

}  // namespace

TEST_CASE("rationals stay normalized") {
  const Rational a(6, -4);
  CHECK(a.denominator() > 0);
  CHECK(a == Rational(-3, 2));
  CHECK(a.to_string() == "-3/2");
  const Rational s = Rational(1, 6) + Rational(1, 3);
  CHECK(s.to_string() == "1/2");
  CHECK(R("4/8") == Rational(1, 2));
  CHECK_THROWS_AS(R("1/0"), Error);
  CHECK_THROWS_AS(R("abc"), Error);
}

TEST_CASE("polynomials store no zero coefficients or duplicate exponents") {
  Polynomial p(2);
  p.add_term(Rational(2), {1, 0});
  p.add_term(Rational(-2), {1, 0});
  CHECK(p.is_zero());
  p.add_term(Rational(1), {0, 1});
  p.add_term(Rational(3), {0, 1});
  REQUIRE(p.terms().size() == 1);
  CHECK(p.terms().begin()->second == Rational(4));
}

TEST_CASE("avi-model fixture parses") {
  const auto inst = fixture("avi-model");
  CHECK(inst.name() == "avi-model");
  CHECK(inst.n() == 1);
  CHECK(inst.m() == 1);
  CHECK(inst.ell() == 1);
  CHECK(inst.is_affine());
  CHECK(inst.F()[0].evaluate(V("2,3")) == Rational(4));
  CHECK(inst.g()[0].evaluate(V("2,3")) == Rational(-3));
}

TEST_CASE("polynomial evaluation") {
  Polynomial uv(2);
  uv.add_term(Rational(1), {1, 1});
  CHECK(uv.evaluate(V("0,0")) == Rational(0));
  const auto px = fixture("avi-model");
  const auto& f = px.objective();
  CHECK(f.evaluate(V("0,1")) == Rational(1));
  CHECK(f.evaluate(V("1,0")) == Rational(2));
}

TEST_CASE("polynomial gradients") {
  Polynomial uv(2);
  uv.add_term(Rational(1), {1, 1});
  const auto g = uv.gradient();
  REQUIRE(g.size() == 2);
  CHECK(g[0] == Polynomial::variable(2, 1));
  CHECK(g[1] == Polynomial::variable(2, 0));
  CHECK(g[0].evaluate(V("0,0")).is_zero());
  CHECK(g[1].evaluate(V("0,0")).is_zero());
  for (const auto& d : Polynomial::constant(3, Rational(7)).gradient()) CHECK(d.is_zero());
}

TEST_CASE("gradients agree with central finite differences") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t vars = 1 + static_cast<std::size_t>(trial % 3);
    const Polynomial p = random_quadratic(gen, vars);
    const auto grad = p.gradient();
    const Vector pt = rnd_vector(gen, vars, -4, 4);
    std::vector<double> z;
    for (const auto& e : pt) z.push_back(e.to_double());
    for (const double h : {1e-3, 1e-4}) {
      for (std::size_t k = 0; k < vars; ++k) {
        auto zp = z, zm = z;
        zp[k] += h;
        zm[k] -= h;
        const double fd = (eval_d(p, zp) - eval_d(p, zm)) / (2 * h);
        const double exact = grad[k].evaluate(pt).to_double();
        CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST_CASE("exact arithmetic identities on random evaluations") {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Polynomial p = random_quadratic(gen, 2);
    const Polynomial q = random_quadratic(gen, 2);
    const Vector a = rnd_vector(gen, 2, -9, 9);
    const Vector b = {Rational(std::uniform_int_distribution<int>(-9, 9)(gen), 7), Rational(1, 3)};
    const Rational pa = p.evaluate(a), pb = p.evaluate(b), qa = q.evaluate(a);
    CHECK((pa + pb) + qa == pa + (pb + qa));
    CHECK((p + q).evaluate(a) == pa + qa);
    CHECK((p * q).evaluate(a) == pa * qa);
    CHECK((pa + pb) - pb == pa);
  }
}

TEST_CASE("serialization round-trips") {
  for (const char* name : {"avi-model", "parabola", "failure-example", "box2", "boxed-x",
                           "duplicated", "crcq-xy"}) {
    const auto inst = fixture(name);
    const auto text = serialize_instance(inst);
    const auto back = parse_instance(text);
    CHECK(back == inst);
    CHECK(serialize_instance(back) == text);
  }
}

TEST_CASE("dimension and type errors") {
  std::string bad = kAffine;
  bad.replace(bad.find(R"("E": [["-1"]])"), 13, R"("E": [["-1"], ["1"]])");
  CHECK(kind_of(bad) == ErrorKind::DimensionMismatch);

  std::string unknown = kAffine;
  unknown.replace(unknown.find("affine"), 6, "cubic");
  CHECK(kind_of(unknown) == ErrorKind::UnknownLowerLevelType);

  CHECK(kind_of("{not json") == ErrorKind::Parse);
  CHECK(kind_of(R"({"n": 1, "m": 1, "ell": 0})") == ErrorKind::Parse);

  const char* cubic = R"({"n": 1, "m": 1, "ell": 1,
    "lower_level": {"type": "polynomial", "F": [[{"coef": "1", "powers": [0, 1]}]],
                    "g": [[{"coef": "1", "powers": [0, 3]}]]}})";
  CHECK(kind_of(cubic) == ErrorKind::DegreeTooHigh);
}

TEST_CASE("ell = 0 gives an unconstrained lower level") {
  const auto inst = parse_instance(R"({"name": "free", "n": 1, "m": 2, "ell": 0,
    "lower_level": {"type": "affine", "P": [["1"], ["0"]], "Q": [["1", "0"], ["0", "1"]],
                    "q": ["0", "-1"]}})");
  CHECK(inst.ell() == 0);
  const auto c = lower_feasible_set(inst, V("3"));
  CHECK(c.num_inequalities() == 0);
  CHECK(c.contains(V("100,-100")));
  const auto sol = solve_lower(inst, V("3"));
  REQUIRE(sol.solutions.size() == 1);
  CHECK(sol.solutions[0].y == V("-3,1"));
}

TEST_CASE("points split as x then y") {
  const auto inst = fixture("box2");
  const Point p = inst.split(V("1,2,3"));
  CHECK(p.x == V("1"));
  CHECK(p.y == V("2,3"));
  CHECK_THROWS_AS(inst.split(V("1,2")), Error);
  CHECK(parse_vector("").empty());
  CHECK(parse_vector("1,-1/2") == Vector{Rational(1), Rational(-1, 2)});
}
