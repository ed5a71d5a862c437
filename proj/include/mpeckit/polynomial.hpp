#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mpeckit/linalg.hpp"

namespace mpeckit {

using Exponents = std::vector<unsigned>;

// Multivariate polynomial with exact coefficients over a fixed number of
// variables. Terms are keyed by exponent vector; zero coefficients are never
// stored.
class Polynomial {
 public:
  explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const Rational& c);
  static Polynomial variable(std::size_t num_vars, std::size_t index);
  // Affine form coeffs^T v + c.
  static Polynomial affine(const Vector& coeffs, const Rational& c);

  std::size_t num_vars() const { return num_vars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }

  void add_term(const Rational& coef, const Exponents& powers);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  unsigned total_degree() const;
  unsigned degree_in(std::size_t var) const;

  Rational evaluate(const Vector& point) const;
  Polynomial derivative(std::size_t var) const;
  std::vector<Polynomial> gradient() const;

  // Fixes every variable except `var` at `point` and returns the coefficients
  // c_0, c_1, ... of the resulting univariate polynomial in `var`.
  std::vector<Rational> univariate_coefficients(std::size_t var,
                                                const Vector& point) const;

  // Gradient and constant of a polynomial of total degree <= 1.
  std::pair<Vector, Rational> affine_parts() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    return a += b;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    return a -= b;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& s, const Polynomial& p);

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  void check_compatible(const Polynomial& other) const;

  std::size_t num_vars_;
  std::map<Exponents, Rational> terms_;
};

// Constant Hessian of a polynomial of total degree <= 2.
Matrix constant_hessian(const Polynomial& p);

}  // namespace mpeckit
