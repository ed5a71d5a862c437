#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mpeckit/cli.hpp"
#include "mpeckit/error.hpp"
#include "mpeckit/geometry.hpp"
#include "mpeckit/multipliers.hpp"
#include "mpeckit/penalty.hpp"
#include "mpeckit/regularity.hpp"
#include "mpeckit/sensitivity.hpp"
#include "support.hpp"

using namespace mpeckit;
using namespace testsupport;

namespace {

using Clock = std::chrono::steady_clock;

// Criterion context: records the first failed check.
struct Ctx {
  std::string failure;
  std::string note;
  void check(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::set<Vector> primitive_set(const std::vector<Vector>& v) {
  std::set<Vector> out;
  for (const auto& d : v) out.insert(primitive_direction(d));
  return out;
}

nlohmann::json cli_json(std::vector<std::string> args, Ctx& c) {
  args.insert(args.begin(), "mpeckit");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  c.check(code == 0, "CLI exit code " + std::to_string(code) + ": " + err.str());
  if (code != 0) return {};
  return nlohmann::json::parse(out.str());
}

void criterion1(Ctx& c) {
  const auto t0 = Clock::now();
  const std::vector<std::pair<const char*, const char*>> grid = {
      {"-1", "2"}, {"0", "1"}, {"1/2", "1/2"}, {"1", "0"}, {"2", "0"}};
  for (const auto& [x, y] : grid) {
    const auto j = cli_json({"lower-solve", fixture_path("avi-model"), "--x", x}, c);
    if (j.is_null()) return;
    const auto& sols = j["results"]["solutions"];
    c.check(sols.size() == 1 && sols[0]["y"] == nlohmann::json::array({y}),
            std::string("y(") + x + ") != " + y);
  }
  const auto px = fixture("avi-model");
  c.check(px.objective().evaluate(V("0,1")) == Rational(1), "f(0,1) != 1");
  c.check(px.objective().evaluate(V("1,0")) == Rational(2), "f(1,0) != 2");
  const auto bm = branch_minimizers(px);
  std::set<std::pair<Vector, Rational>> cand;
  for (const auto& k : bm.candidates) cand.insert({k.z, k.value});
  c.check(cand.count({V("0,1"), Rational(1)}) == 1, "candidate (0,1) with f = 1 missing");
  c.check(cand.count({V("1,0"), Rational(2)}) == 1, "candidate (1,0) with f = 2 missing");
  c.check(bm.best && bm.candidates[*bm.best].z == V("0,1"), "best candidate is not (0,1)");
  const double s = seconds_since(t0);
  c.check(s < 1.0, "took " + std::to_string(s) + " s");
}

void criterion2(Ctx& c) {
  const struct {
    const char* name;
    const char* point;
    std::vector<Vector> expect;
  } cases[] = {
      {"omega", "0,0", {V("1,0"), V("0,1")}},
      {"avi-model", "1,0", {V("1,0"), V("-1,1")}},
      {"parabola", "0,0", {V("1,0"), V("-1,0")}},
      {"failure-example", "0,0", {V("-1,0"), V("1,1")}},
  };
  for (const auto& k : cases) {
    const auto t0 = Clock::now();
    const auto inst = fixture(k.name);
    const auto cu = tangent_cone(inst, P(inst, k.point));
    c.check(primitive_set(cu.generators()) == primitive_set(k.expect),
            std::string(k.name) + " generators differ");
    const double s = seconds_since(t0);
    c.check(s < 1.0, std::string(k.name) + " took " + std::to_string(s) + " s");
  }
}

void criterion3(Ctx& c) {
  const auto fe = fixture("failure-example");
  const auto bs = bstationarity_check(fe, P(fe, "0,0"));
  c.check(!bs.stationary, "failure-example reported stationary");
  c.check(primitive_direction(bs.direction) == V("-1,0"), "witness is not along (-1,0)");
  Vector grad;
  for (const auto& d : fe.objective().gradient()) grad.push_back(d.evaluate(V("0,0")));
  c.check(dot(grad, V("-1,0")) == Rational(-1), "grad f(0,0)^T (-1,0) != -1");
  const auto s = solve_lower(fe, V("-1/4"));
  bool feasible = false;
  for (const auto& sol : s.solutions) feasible = feasible || sol.y == V("0");
  c.check(feasible, "(-1/4, 0) not feasible");
  c.check(fe.objective().evaluate(V("-1/4,0")) == Rational(-3, 16), "f(-1/4,0) != -3/16");

  const auto px = fixture("avi-model");
  c.check(bstationarity_check(px, P(px, "0,1")).stationary, "avi-model (0,1) not stationary");
  c.check(local_min_certificate(px, P(px, "0,1")).local_minimum, "no LocalMinimum at (0,1)");
}

void criterion4(Ctx& c) {
  const auto pm = fixture("projection-map");
  const auto p0 = P(pm, "0,0");
  c.check(directional_derivative(pm, p0, V("1")).dy == V("1"), "y'(0;1) != 1");
  c.check(directional_derivative(pm, p0, V("-1")).dy == V("0"), "y'(0;-1) != 0");
  c.check(!frechet_test(pm, p0).differentiable, "projection map reported differentiable");
  const auto px = fixture("avi-model");
  const auto p1 = P(px, "1,0");
  c.check(directional_derivative(px, p1, V("1")).dy == V("0"), "y'(1;1) != 0");
  c.check(directional_derivative(px, p1, V("-1")).dy == V("1"), "y'(1;-1) != 1");

  // Slope check: C_h = e(h)/h with e(h) the finite-difference error.
  const struct {
    const char* name;
    const char* point;
  } cases[] = {{"projection-map", "0,0"}, {"avi-model", "1,0"}, {"avi-model", "0,1"},
               {"parabola", "1,1"}, {"box2", "0,0,0"}};
  std::ostringstream note;
  for (const auto& k : cases) {
    const auto inst = fixture(k.name);
    const auto p = P(inst, k.point);
    for (const char* d : {"1", "-1"}) {
      const Vector der = directional_derivative(inst, p, V(d)).dy;
      std::vector<double> ratios;
      for (const int inv : {100, 1000, 10000}) {
        const Rational h(1, inv);
        const auto t = sample_implicit_map(inst, {p.x + h * V(d)});
        if (!t.rows[0].y) {
          c.check(false, std::string(k.name) + ": oracle not single-valued");
          return;
        }
        const Vector quot = Rational(inv) * (*t.rows[0].y - p.y);
        ratios.push_back(norm1(quot - der).to_double() * inv);
      }
      const double lo = *std::min_element(ratios.begin(), ratios.end());
      const double hi = *std::max_element(ratios.begin(), ratios.end());
      const bool ok = hi == 0.0 || (lo > 0.0 && hi / lo <= 2.0);
      c.check(ok, std::string(k.name) + " slope ratio " + std::to_string(hi / lo));
      if (hi > 0.0) note << k.name << " d=" << d << ": C in [" << lo << ", " << hi << "] ";
    }
  }
  c.note = note.str();
}

void criterion5(Ctx& c) {
  const auto px = fixture("avi-model");
  const auto s = check_scoc(px, P(px, "1,0"));
  c.check(s.holds && s.sign == 1, "avi-model (1,0) does not hold with sign +1");
  c.check(s.matrices.size() == 2 && s.matrices[0].det_sign == 1 && s.matrices[1].det_sign == 1,
          "per-J signs are not (+1,+1)");
  // Under LICQ, B = {J : supp(lambda) <= J <= I}; it is the single matrix A_I
  // when supp(lambda) = I. Otherwise SCOC => det A_I != 0 is what remains.
  const std::vector<std::pair<const char*, const char*>> licq = {
      {"avi-model", "1,0"}, {"avi-model", "2,0"}, {"avi-model", "0,1"}, {"box2", "0,0,0"},
      {"box2", "1,1,0"},   {"omega", "0,0"},    {"projection-map", "0,0"}};
  std::size_t strict = 0, weak = 0;
  for (const auto& [name, pt] : licq) {
    const auto inst = fixture(name);
    const auto p = P(inst, pt);
    if (!check_licq(inst, p).holds) {
      c.check(false, std::string(name) + " is not LICQ");
      continue;
    }
    const auto mp = multiplier_set(inst, p);
    const auto lm = local_model(inst, p);
    const bool nonsingular = det_sign(scoc_matrix(lm, lm.active, mp.vertices.at(0))) != 0;
    const bool holds = check_scoc(inst, p).holds;
    if (support(mp.vertices.at(0)) == lm.active) {
      c.check(holds == nonsingular, std::string(name) + " LICQ mismatch");
      ++strict;
    } else {
      c.check(!holds || nonsingular, std::string(name) + " SCOC holds with singular A_I");
      ++weak;
    }
  }
  c.note = std::to_string(strict) + " strictly complementary LICQ points, " +
           std::to_string(weak) + " weakly complementary";
  for (const auto& [name, pt] : {std::pair{"avi-model", "2,0"}, std::pair{"box2", "1,1,0"}}) {
    const auto inst = fixture(name);
    const auto p = P(inst, pt);
    const auto r = check_scoc_reduced(inst, p);
    c.check(r.applicable, std::string(name) + " reduced test not applicable");
    c.check(r.nonsingular == check_scoc(inst, p).holds, std::string(name) + " reduced disagrees");
  }
}

struct RandomSet {
  std::vector<RandomAvi> items;
};

const RandomSet& random_set() {
  static const RandomSet set = [] {
    RandomSet s;
    std::mt19937 gen(20240601);
    for (int k = 0; k < 100; ++k) s.items.push_back(random_affine(gen));
    return s;
  }();
  return set;
}

bool in_continuum(const AviContinuum& cont, const Vector& y) {
  Matrix a(y.size(), cont.directions.size());
  for (std::size_t j = 0; j < cont.directions.size(); ++j)
    for (std::size_t i = 0; i < y.size(); ++i) a(i, j) = cont.directions[j][i];
  return solve_linear(a, y - cont.particular).has_value();
}

void criterion6(Ctx& c) {
  const auto t0 = Clock::now();
  std::size_t exact = 0, empty = 0, continuum = 0;
  for (const auto& [inst, x] : random_set().items) {
    const auto oracle = pattern_oracle(inst.affine(), x);
    ViSolutionSet s;
    try {
      s = solve_avi(inst, x);
    } catch (const Error& e) {
      c.check(e.kind() == ErrorKind::EmptyLowerFeasibleSet && oracle.solutions.empty() &&
                  !is_feasible(lower_feasible_set(inst, x)),
              std::string("unexpected error ") + e.what());
      ++empty;
      continue;
    }
    std::set<Vector> got;
    for (const auto& sol : s.solutions) got.insert(sol.y);
    if (s.exhaustive) {
      c.check(got == oracle.solutions, "solution sets differ at instance " +
                                           std::to_string(exact + empty + continuum));
      ++exact;
    } else {
      // Isolated oracle points must be reported or lie in a reported continuum.
      for (const auto& y : oracle.solutions) {
        bool covered = got.count(y) > 0;
        for (const auto& cont : s.continua) covered = covered || in_continuum(cont, y);
        c.check(covered, "continuum instance misses an oracle solution");
      }
      ++continuum;
    }
  }
  const double secs = seconds_since(t0);
  c.check(secs < 30.0, "took " + std::to_string(secs) + " s");
  c.note = std::to_string(exact) + " compared exactly, " + std::to_string(empty) +
           " with empty C(x), " + std::to_string(continuum) + " with continua";
}

void criterion7(Ctx& c) {
  std::mt19937 gen(7);
  std::size_t checked = 0;
  for (const auto& [inst, x] : random_set().items) {
    ViSolutionSet s;
    try {
      s = solve_avi(inst, x);
    } catch (const Error&) {
      continue;
    }
    if (!s.exhaustive) continue;
    const auto& a = inst.affine();
    std::vector<Vector> candidates;
    for (const auto& sol : s.solutions) candidates.push_back(sol.y);
    for (int k = 0; k < 5; ++k) candidates.push_back(rnd_vector(gen, inst.m(), -3, 3));
    for (const auto& y : candidates) {
      const bool solves = std::any_of(s.solutions.begin(), s.solutions.end(),
                                      [&](const ViSolution& v) { return v.y == y; });
      const Vector F = a.P * x + a.Q * y + a.q;
      const auto h = normal_map_eval(inst, x, y - F);
      c.check(solves == (h.is_zero && h.y == y), "normal map disagrees with the solution set");
      ++checked;
    }
    // Zeros of the normal map project onto solutions.
    for (int k = 0; k < 5; ++k) {
      const auto h = normal_map_eval(inst, x, rnd_vector(gen, inst.m(), -3, 3));
      const bool solves = std::any_of(s.solutions.begin(), s.solutions.end(),
                                      [&](const ViSolution& v) { return v.y == h.y; });
      c.check(!h.is_zero || solves, "normal map zero does not project onto a solution");
      ++checked;
    }
  }
  c.note = std::to_string(checked) + " (x, y) and (x, v) pairs";
}

void criterion8(Ctx& c) {
  const auto px = fixture("avi-model");
  const std::vector<Rational> rhos = {Rational(0), Rational(1), Rational(10)};
  const auto rep = empirical_exactness_scan(px, P(px, "0,1"), rhos, R("1/2"), R("1/16"));
  c.check(rep.empirical_rho.has_value() && *rep.empirical_rho <= Rational(10),
          "no empirical rho-bar <= 10");
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    c.check(!rep.rows[i - 1].matches_reference || rep.rows[i].matches_reference,
            "matchesReference not monotone");
  }
  std::size_t samples = 0;
  for (Rational x = R("-1/2"); x <= R("1/2"); x += R("1/16")) {
    for (const auto& sol : solve_avi(px, {x}).solutions) {
      c.check(residual_phi(px, Point{{x}, sol.y}).is_zero(), "phi != 0 at an equilibrium");
      ++samples;
    }
  }
  if (rep.empirical_rho) {
    c.note = "rho-bar = " + rep.empirical_rho->to_string() + ", " + std::to_string(samples) +
             " equilibrium samples";
  }
}

void criterion9(Ctx& c) {
  const std::vector<std::pair<const char*, const char*>> pts = {
      {"avi-model", "1,0"}, {"avi-model", "2,0"},    {"avi-model", "0,1"},  {"omega", "0,0"},
      {"projection-map", "0,0"}, {"box2", "0,0,0"}, {"box2", "1,1,0"}, {"duplicated", "1,0"},
      {"duplicated", "2,0"}, {"multi-solution", "0,0"}, {"boxed-x", "2,0"},
      {"parabola", "0,0"}, {"failure-example", "0,0"}, {"crcq-xy", "0,0"}};
  std::size_t licq = 0;
  for (const auto& [name, pt] : pts) {
    const auto inst = fixture(name);
    const auto p = P(inst, pt);
    const auto m = check_mfcq(inst, p);
    if (m.holds) {
      const auto lm = local_model(inst, p);
      bool ok = m.t.sign() > 0;
      for (std::size_t i : lm.active) ok = ok && dot(lm.Gy.row(i), m.v) <= -m.t;
      c.check(ok, std::string(name) + " MFCQ certificate invalid");
    }
    if (check_licq(inst, p).holds) {
      ++licq;
      const auto mp = multiplier_set(inst, p);
      c.check(mp.bounded && mp.vertices.size() <= 1 &&
                  (mp.vertices.size() == 1 || mp.is_empty()),
              std::string(name) + " LICQ without a singleton multiplier set");
    }
    if (inst.is_affine()) {
      c.check(!check_crcq_sampled(inst, p).falsified, std::string(name) + " CRCQ falsified");
    }
  }
  const auto xy = fixture("crcq-xy");
  c.check(check_crcq_sampled(xy, P(xy, "0,0")).falsified, "g = xy not falsified");
  c.note = std::to_string(licq) + " LICQ points";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Ctx&)>>> criteria = {
      {"AVI model reproduction", criterion1},      {"tangent cone fixtures", criterion2},
      {"stationarity fixtures", criterion3},       {"sensitivity fixtures", criterion4},
      {"SCOC", criterion5},                        {"oracle equivalence", criterion6},
      {"VI and normal map equivalence", criterion7}, {"penalty scan", criterion8},
      {"CQ suite", criterion9},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Ctx c;
    try {
      criteria[k].second(c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    const bool pass = c.failure.empty();
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << (k + 1) << ": "
              << criteria[k].first;
    if (!pass) std::cout << " (" << c.failure << ")";
    else if (!c.note.empty()) std::cout << " [" << c.note << "]";
    std::cout << "\n";
  }
  return failed == 0 ? 0 : 1;
}
