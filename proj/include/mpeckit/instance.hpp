#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mpeckit/polyhedra.hpp"
#include "mpeckit/polynomial.hpp"

namespace mpeckit {

// F(x,y) = P x + Q y + q,  g(x,y) = D x + E y + b.
struct AffineVi {
  Matrix P, Q;
  Vector q;
  Matrix D, E;
  Vector b;

  friend bool operator==(const AffineVi&, const AffineVi&) = default;
};

// F and g given as polynomials in (x_1..x_n, y_1..y_m).
struct PolynomialVi {
  std::vector<Polynomial> F;
  std::vector<Polynomial> g;

  friend bool operator==(const PolynomialVi&, const PolynomialVi&) = default;
};

using LowerLevel = std::variant<AffineVi, PolynomialVi>;

struct Point {
  Vector x;
  Vector y;

  Vector z() const { return concat(x, y); }
  friend bool operator==(const Point&, const Point&) = default;
};

// min f(x,y) s.t. x in X, (x,y) in Z, y solves VI(F(x,.), C(x)) with
// C(x) = {y : g(x,y) <= 0}. Built through make_instance, which validates
// dimensions and derives the polynomial forms of F and g.
class MpecInstance {
 public:
  const std::string& name() const { return name_; }
  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t ell() const { return ell_; }
  const Polynomial& objective() const { return objective_; }
  const LowerLevel& lower_level() const { return lower_; }
  bool is_affine() const { return std::holds_alternative<AffineVi>(lower_); }
  const AffineVi& affine() const;
  const HPolyhedron& upper_set() const { return upper_; }
  const std::optional<HPolyhedron>& joint_set() const { return joint_; }

  // Component polynomials over (x, y), available in both modes.
  const std::vector<Polynomial>& F() const { return F_; }
  const std::vector<Polynomial>& g() const { return g_; }

  Point split(const Vector& z) const;
  void check_point(const Point& p) const;

  friend bool operator==(const MpecInstance& a, const MpecInstance& b);

  friend MpecInstance make_instance(std::string name, std::size_t n,
                                    std::size_t m, Polynomial objective,
                                    LowerLevel lower,
                                    std::optional<HPolyhedron> upper,
                                    std::optional<HPolyhedron> joint);

 private:
  std::string name_;
  std::size_t n_ = 0, m_ = 0, ell_ = 0;
  Polynomial objective_;
  LowerLevel lower_;
  HPolyhedron upper_;
  std::optional<HPolyhedron> joint_;
  std::vector<Polynomial> F_, g_;
};

// Validates and builds an instance. A missing upper set means X = R^n.
MpecInstance make_instance(std::string name, std::size_t n, std::size_t m,
                           Polynomial objective, LowerLevel lower,
                           std::optional<HPolyhedron> upper = std::nullopt,
                           std::optional<HPolyhedron> joint = std::nullopt);

MpecInstance parse_instance(std::string_view text);
MpecInstance load_instance(const std::string& path);
std::string serialize_instance(const MpecInstance& inst);

// Substitutes x into p (over (x,y)) and returns a polynomial in y only.
Polynomial restrict_to_y(const Polynomial& p, const Vector& x, std::size_t m);

// Comma-separated rationals, e.g. "1,-1/2". The empty string is the empty
// vector.
Vector parse_vector(std::string_view text);

}  // namespace mpeckit
