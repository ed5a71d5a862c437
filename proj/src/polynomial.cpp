#include "mpeckit/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "mpeckit/error.hpp"

namespace mpeckit {

namespace {

Rational power(const Rational& base, unsigned exp) {
  Rational r = 1;
  for (unsigned k = 0; k < exp; ++k) r *= base;
  return r;
}

}  // namespace

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& c) {
  Polynomial p(num_vars);
  p.add_term(c, Exponents(num_vars, 0));
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  Polynomial p(num_vars);
  Exponents e(num_vars, 0);
  e.at(index) = 1;
  p.add_term(1, e);
  return p;
}

Polynomial Polynomial::affine(const Vector& coeffs, const Rational& c) {
  Polynomial p(coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    Exponents e(coeffs.size(), 0);
    e[j] = 1;
    p.add_term(coeffs[j], e);
  }
  p.add_term(c, Exponents(coeffs.size(), 0));
  return p;
}

void Polynomial::add_term(const Rational& coef, const Exponents& powers) {
  if (powers.size() != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch,
                "term has " + std::to_string(powers.size()) +
                    " exponents, polynomial has " + std::to_string(num_vars_) +
                    " variables");
  }
  if (coef.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(powers, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && total_degree() == 0);
}

unsigned Polynomial::total_degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) {
    unsigned s = 0;
    for (unsigned k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

unsigned Polynomial::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
  return d;
}

Rational Polynomial::evaluate(const Vector& point) const {
  if (point.size() != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch,
                "evaluation point has " + std::to_string(point.size()) +
                    " coordinates, polynomial has " +
                    std::to_string(num_vars_) + " variables");
  }
  Rational sum;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t j = 0; j < num_vars_ && !t.is_zero(); ++j) {
      if (e[j]) t *= power(point[j], e[j]);
    }
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial d(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(var) == 0) continue;
    Exponents lowered = e;
    --lowered[var];
    d.add_term(c * Rational(static_cast<long>(e[var])), lowered);
  }
  return d;
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> g;
  g.reserve(num_vars_);
  for (std::size_t j = 0; j < num_vars_; ++j) g.push_back(derivative(j));
  return g;
}

std::vector<Rational> Polynomial::univariate_coefficients(
    std::size_t var, const Vector& point) const {
  if (point.size() != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "univariate restriction point");
  }
  std::vector<Rational> coeffs(degree_in(var) + 1);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t j = 0; j < num_vars_; ++j) {
      if (j != var && e[j]) t *= power(point[j], e[j]);
    }
    coeffs[e[var]] += t;
  }
  while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
  return coeffs;
}

std::pair<Vector, Rational> Polynomial::affine_parts() const {
  if (total_degree() > 1) {
    throw Error(ErrorKind::DegreeTooHigh, "polynomial is not affine");
  }
  Vector grad(num_vars_);
  Rational c;
  for (const auto& [e, coef] : terms_) {
    const auto it = std::find(e.begin(), e.end(), 1u);
    if (it == e.end()) {
      c += coef;
    } else {
      grad[static_cast<std::size_t>(it - e.begin())] += coef;
    }
  }
  return {grad, c};
}

void Polynomial::check_compatible(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch,
                "polynomials over different variable counts");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_) add_term(c, e);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_) add_term(-c, e);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b);
  Polynomial out(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(a.num_vars_);
      for (std::size_t j = 0; j < e.size(); ++j) e[j] = ea[j] + eb[j];
      out.add_term(ca * cb, e);
    }
  }
  return out;
}

Polynomial operator*(const Rational& s, const Polynomial& p) {
  Polynomial out(p.num_vars_);
  for (const auto& [e, c] : p.terms_) out.add_term(s * c, e);
  return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest total degree first, then reverse lexicographic exponents.
  std::vector<std::pair<Exponents, Rational>> ordered(terms_.begin(),
                                                      terms_.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) {
                     unsigned da = 0, db = 0;
                     for (unsigned k : a.first) da += k;
                     for (unsigned k : b.first) db += k;
                     if (da != db) return da > db;
                     return a.first > b.first;
                   });
  for (const auto& [e, c] : ordered) {
    const bool constant_term =
        std::all_of(e.begin(), e.end(), [](unsigned k) { return k == 0; });
    Rational mag = c.abs();
    if (first) {
      if (c.sign() < 0) os << '-';
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (constant_term || mag != Rational(1)) {
      os << mag;
      wrote = true;
    }
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (!e[j]) continue;
      if (wrote) os << '*';
      os << (j < names.size() ? names[j] : "v" + std::to_string(j + 1));
      if (e[j] > 1) os << '^' << e[j];
      wrote = true;
    }
  }
  return os.str();
}

Matrix constant_hessian(const Polynomial& p) {
  if (p.total_degree() > 2) {
    throw Error(ErrorKind::DegreeTooHigh,
                "constant Hessian requires total degree <= 2");
  }
  const std::size_t n = p.num_vars();
  Matrix h(n, n);
  const Vector origin(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomial di = p.derivative(i);
    for (std::size_t j = 0; j < n; ++j) {
      h(i, j) = di.derivative(j).evaluate(origin);
    }
  }
  return h;
}

}  // namespace mpeckit
