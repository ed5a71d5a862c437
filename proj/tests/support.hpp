#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mpeckit/instance.hpp"
#include "mpeckit/lower_level.hpp"

namespace testsupport {

using mpeckit::Matrix;
using mpeckit::Rational;
using mpeckit::Vector;

inline mpeckit::MpecInstance fixture(const std::string& name) {
  return mpeckit::load_instance(std::string(MPECKIT_FIXTURE_DIR) + "/" + name + ".json");
}

inline std::string fixture_path(const std::string& name) {
  return std::string(MPECKIT_FIXTURE_DIR) + "/" + name + ".json";
}

inline Rational R(const char* s) { return Rational::parse(s); }
inline Vector V(const char* s) { return mpeckit::parse_vector(s); }

inline mpeckit::Point P(const mpeckit::MpecInstance& inst, const char* z) {
  return inst.split(V(z));
}

inline Rational rnd(std::mt19937& gen, int lo, int hi) {
  return Rational(std::uniform_int_distribution<int>(lo, hi)(gen));
}

inline Matrix rnd_matrix(std::mt19937& gen, std::size_t r, std::size_t c, int lo, int hi) {
  Matrix a(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = rnd(gen, lo, hi);
  return a;
}

inline Vector rnd_vector(std::mt19937& gen, std::size_t n, int lo, int hi) {
  Vector v(n);
  for (auto& e : v) e = rnd(gen, lo, hi);
  return v;
}

struct RandomAvi {
  mpeckit::MpecInstance inst;
  Vector x;
};

// n, m <= 3 and ell <= 6 with small integer data. Half of the Q matrices are
// made positive definite by adding a multiple of the identity. The offsets b
// keep a random integer point y0 feasible at x, so C(x) is nonempty.
inline RandomAvi random_affine(std::mt19937& gen) {
  auto pick = [&](int lo, int hi) {
    return static_cast<std::size_t>(std::uniform_int_distribution<int>(lo, hi)(gen));
  };
  const std::size_t n = pick(1, 3), m = pick(1, 3), ell = pick(0, 6);
  mpeckit::AffineVi a;
  a.P = rnd_matrix(gen, m, n, -2, 2);
  a.Q = rnd_matrix(gen, m, m, -2, 2);
  if (pick(0, 1) == 1) {
    for (std::size_t i = 0; i < m; ++i) a.Q(i, i) += Rational(5);
  }
  a.q = rnd_vector(gen, m, -3, 3);
  a.D = rnd_matrix(gen, ell, n, -2, 2);
  a.E = rnd_matrix(gen, ell, m, -2, 2);
  const Vector x = rnd_vector(gen, n, -2, 2);
  const Vector y0 = rnd_vector(gen, m, -1, 1);
  const Vector at = a.D * x + a.E * y0;
  a.b = Vector(ell);
  for (std::size_t i = 0; i < ell; ++i) a.b[i] = -at[i] - rnd(gen, 0, 2);
  auto inst = mpeckit::make_instance("random", n, m, mpeckit::Polynomial(n + m), a);
  return {std::move(inst), x};
}

// Gaussian elimination on a square system; nullopt when singular.
inline std::optional<Vector> gauss(Matrix a, Vector b) {
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c).is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      const Rational f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      b[r] -= f * b[c];
    }
  }
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a(i, i);
  return x;
}

struct OracleResult {
  std::set<Vector> solutions;
};

// Scans every support S of the multiplier: solves
//   Q y + E_S^T lam_S = -(P x + q),  E_S y = -(D x + b)_S
// whenever the system is square-nonsingular, and keeps the y that are
// feasible with lam_S >= 0.
inline OracleResult pattern_oracle(const mpeckit::AffineVi& a, const Vector& x) {
  const std::size_t m = a.Q.rows(), ell = a.E.rows();
  const Vector px = a.P * x;
  const Vector dx = a.D * x;
  OracleResult out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << ell); ++s) {
    std::vector<std::size_t> S;
    for (std::size_t i = 0; i < ell; ++i)
      if (s >> i & 1) S.push_back(i);
    const std::size_t k = S.size();
    Matrix K(m + k, m + k);
    Vector rhs(m + k);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) K(i, j) = a.Q(i, j);
      for (std::size_t t = 0; t < k; ++t) K(i, m + t) = a.E(S[t], i);
      rhs[i] = -(px[i] + a.q[i]);
    }
    for (std::size_t t = 0; t < k; ++t) {
      for (std::size_t j = 0; j < m; ++j) K(m + t, j) = a.E(S[t], j);
      rhs[m + t] = -(dx[S[t]] + a.b[S[t]]);
    }
    const auto sol = gauss(K, rhs);
    if (!sol) continue;
    Vector y(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(m));
    bool ok = true;
    for (std::size_t t = 0; t < k; ++t) ok = ok && (*sol)[m + t].sign() >= 0;
    const Vector g = a.E * y;
    for (std::size_t i = 0; i < ell; ++i) ok = ok && (g[i] + dx[i] + a.b[i]).sign() <= 0;
    if (ok) out.solutions.insert(y);
  }
  return out;
}

// Membership in the oracle's solution set.
inline bool is_vi_solution(const mpeckit::AffineVi& a, const Vector& x, const Vector& y) {
  const auto res = pattern_oracle(a, x);
  return res.solutions.count(y) > 0;
}

}  // namespace testsupport
