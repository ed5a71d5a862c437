#include "mpeckit/instance.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mpeckit/error.hpp"

namespace mpeckit {

using nlohmann::json;
using nlohmann::ordered_json;

const AffineVi& MpecInstance::affine() const {
  if (!is_affine()) {
    throw Error(ErrorKind::Unsupported, "operation requires an affine lower level");
  }
  return std::get<AffineVi>(lower_);
}

Point MpecInstance::split(const Vector& z) const {
  if (z.size() != n_ + m_) {
    throw Error(ErrorKind::DimensionMismatch,
                "point has " + std::to_string(z.size()) +
                    " coordinates, expected n+m = " + std::to_string(n_ + m_));
  }
  const auto mid = z.begin() + static_cast<std::ptrdiff_t>(n_);
  return Point{Vector(z.begin(), mid), Vector(mid, z.end())};
}

void MpecInstance::check_point(const Point& p) const {
  if (p.x.size() != n_ || p.y.size() != m_) {
    throw Error(ErrorKind::DimensionMismatch,
                "point dimensions (" + std::to_string(p.x.size()) + "," +
                    std::to_string(p.y.size()) + ") do not match (n,m) = (" +
                    std::to_string(n_) + "," + std::to_string(m_) + ")");
  }
}

bool operator==(const MpecInstance& a, const MpecInstance& b) {
  return a.name_ == b.name_ && a.n_ == b.n_ && a.m_ == b.m_ &&
         a.ell_ == b.ell_ && a.objective_ == b.objective_ &&
         a.lower_ == b.lower_ && a.upper_ == b.upper_ && a.joint_ == b.joint_;
}

namespace {

void expect_shape(const Matrix& a, std::size_t rows, std::size_t cols,
                  const char* what) {
  if (a.rows() != rows || (rows > 0 && a.cols() != cols)) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + ", expected " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void expect_length(const Vector& v, std::size_t len, const char* what) {
  if (v.size() != len) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " has length " + std::to_string(v.size()) +
                    ", expected " + std::to_string(len));
  }
}

void check_polyhedron(const HPolyhedron& p, std::size_t dim, const char* what) {
  if (p.dim != dim) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " has dimension " + std::to_string(p.dim) +
                    ", expected " + std::to_string(dim));
  }
  expect_shape(p.A, p.b.size(), dim, what);
  expect_shape(p.Aeq, p.beq.size(), dim, what);
}

// Row i of [L R] z + c as a polynomial over (x, y).
Polynomial affine_row(const Matrix& left, const Matrix& right, const Vector& c,
                      std::size_t i, std::size_t n, std::size_t m) {
  Vector coeffs(n + m);
  for (std::size_t j = 0; j < n; ++j) coeffs[j] = left(i, j);
  for (std::size_t j = 0; j < m; ++j) coeffs[n + j] = right(i, j);
  return Polynomial::affine(coeffs, c[i]);
}

}  // namespace

MpecInstance make_instance(std::string name, std::size_t n, std::size_t m,
                           Polynomial objective, LowerLevel lower,
                           std::optional<HPolyhedron> upper,
                           std::optional<HPolyhedron> joint) {
  MpecInstance inst;
  inst.name_ = std::move(name);
  inst.n_ = n;
  inst.m_ = m;
  if (objective.num_vars() != n + m) {
    throw Error(ErrorKind::DimensionMismatch,
                "objective must be a polynomial in n+m variables");
  }
  if (auto* a = std::get_if<AffineVi>(&lower)) {
    const std::size_t ell = a->b.size();
    expect_shape(a->P, m, n, "P");
    expect_shape(a->Q, m, m, "Q");
    expect_length(a->q, m, "q");
    expect_shape(a->D, ell, n, "D");
    expect_shape(a->E, ell, m, "E");
    if (a->P.rows() == 0 || a->P.cols() != n) a->P = Matrix(m, n);
    if (a->Q.rows() == 0 || a->Q.cols() != m) a->Q = Matrix(m, m);
    if (a->D.cols() != n) a->D = Matrix(ell, n);
    if (a->E.cols() != m) a->E = Matrix(ell, m);
    inst.ell_ = ell;
    for (std::size_t i = 0; i < m; ++i) {
      inst.F_.push_back(affine_row(a->P, a->Q, a->q, i, n, m));
    }
    for (std::size_t i = 0; i < ell; ++i) {
      inst.g_.push_back(affine_row(a->D, a->E, a->b, i, n, m));
    }
  } else {
    const auto& p = std::get<PolynomialVi>(lower);
    if (p.F.size() != m) {
      throw Error(ErrorKind::DimensionMismatch,
                  "F has " + std::to_string(p.F.size()) +
                      " components, expected m = " + std::to_string(m));
    }
    for (const auto& poly : p.F) {
      if (poly.num_vars() != n + m) {
        throw Error(ErrorKind::DimensionMismatch,
                    "F components must be polynomials in n+m variables");
      }
    }
    for (std::size_t i = 0; i < p.g.size(); ++i) {
      if (p.g[i].num_vars() != n + m) {
        throw Error(ErrorKind::DimensionMismatch,
                    "g components must be polynomials in n+m variables");
      }
      if (p.g[i].total_degree() > 2) {
        throw Error(ErrorKind::DegreeTooHigh,
                    "g_" + std::to_string(i + 1) + " has total degree " +
                        std::to_string(p.g[i].total_degree()) + " > 2");
      }
    }
    inst.ell_ = p.g.size();
    inst.F_ = p.F;
    inst.g_ = p.g;
  }
  inst.objective_ = std::move(objective);
  inst.lower_ = std::move(lower);
  inst.upper_ = upper ? std::move(*upper) : HPolyhedron(n);
  check_polyhedron(inst.upper_, n, "upper_set");
  if (joint) check_polyhedron(*joint, n + m, "joint_set");
  inst.joint_ = std::move(joint);
  return inst;
}

// ---------------------------------------------------------------------------
// JSON format

namespace {

[[noreturn]] void parse_error(const std::string& msg) {
  throw Error(ErrorKind::Parse, msg);
}

Rational rational_from(const json& j, const std::string& where) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  parse_error(where + ": expected a rational string or integer");
}

Vector vector_from(const json& j, const std::string& where) {
  if (!j.is_array()) parse_error(where + ": expected an array");
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    v.push_back(rational_from(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return v;
}

Matrix matrix_from(const json& j, std::size_t cols, const std::string& where) {
  if (!j.is_array()) parse_error(where + ": expected an array of rows");
  Matrix a(0, cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    Vector row = vector_from(j[i], where + "[" + std::to_string(i) + "]");
    if (row.size() != cols) {
      throw Error(ErrorKind::DimensionMismatch,
                  where + " row " + std::to_string(i) + " has length " +
                      std::to_string(row.size()) + ", expected " +
                      std::to_string(cols));
    }
    a.append_row(row);
  }
  return a;
}

Polynomial polynomial_from(const json& j, std::size_t vars,
                           const std::string& where) {
  if (!j.is_array()) parse_error(where + ": expected a term list");
  Polynomial p(vars);
  for (const auto& term : j) {
    if (!term.is_object() || !term.contains("coef") || !term.contains("powers")) {
      parse_error(where + ": terms need \"coef\" and \"powers\"");
    }
    const auto& pw = term.at("powers");
    if (!pw.is_array()) parse_error(where + ": powers must be an array");
    Exponents e;
    for (const auto& k : pw) {
      if (!k.is_number_unsigned() && !(k.is_number_integer() && k.get<long>() >= 0)) {
        parse_error(where + ": powers must be nonnegative integers");
      }
      e.push_back(k.get<unsigned>());
    }
    if (e.size() != vars) {
      throw Error(ErrorKind::DimensionMismatch,
                  where + ": term has " + std::to_string(e.size()) +
                      " powers, expected n+m = " + std::to_string(vars));
    }
    p.add_term(rational_from(term.at("coef"), where), e);
  }
  return p;
}

std::size_t size_from(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long>() < 0) {
    parse_error(std::string("missing or invalid \"") + key + "\"");
  }
  return j.at(key).get<std::size_t>();
}

HPolyhedron polyhedron_from(const json& j, std::size_t dim,
                            const std::string& where) {
  if (!j.is_object()) parse_error(where + ": expected an object");
  HPolyhedron p(dim);
  if (j.contains("A")) {
    p.A = matrix_from(j.at("A"), dim, where + ".A");
    p.b = vector_from(j.value("b", json::array()), where + ".b");
  }
  if (j.contains("Aeq")) {
    p.Aeq = matrix_from(j.at("Aeq"), dim, where + ".Aeq");
    p.beq = vector_from(j.value("beq", json::array()), where + ".beq");
  }
  return p;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) parse_error(where + ": missing \"" + key + "\"");
  return j.at(key);
}

ordered_json to_json(const Rational& r) { return r.to_string(); }

ordered_json to_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (const auto& e : v) a.push_back(to_json(e));
  return a;
}

ordered_json to_json(const Matrix& m) {
  ordered_json a = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

ordered_json to_json(const Polynomial& p) {
  ordered_json a = ordered_json::array();
  for (const auto& [e, c] : p.terms()) {
    ordered_json t;
    t["coef"] = to_json(c);
    t["powers"] = e;
    a.push_back(std::move(t));
  }
  return a;
}

ordered_json to_json(const HPolyhedron& p) {
  ordered_json o;
  o["A"] = to_json(p.A);
  o["b"] = to_json(p.b);
  if (p.num_equalities() > 0) {
    o["Aeq"] = to_json(p.Aeq);
    o["beq"] = to_json(p.beq);
  }
  return o;
}

}  // namespace

MpecInstance parse_instance(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) parse_error("instance must be a JSON object");
  const std::string name = j.value("name", std::string("unnamed"));
  const std::size_t n = size_from(j, "n");
  const std::size_t m = size_from(j, "m");
  const std::size_t ell = size_from(j, "ell");
  const std::size_t vars = n + m;

  Polynomial objective =
      j.contains("objective") ? polynomial_from(j.at("objective"), vars, "objective")
                              : Polynomial(vars);

  const json& ll = field(j, "lower_level", "instance");
  const std::string type = field(ll, "type", "lower_level").get<std::string>();
  LowerLevel lower;
  if (type == "affine") {
    AffineVi a;
    a.P = matrix_from(field(ll, "P", "lower_level"), n, "P");
    a.Q = matrix_from(field(ll, "Q", "lower_level"), m, "Q");
    a.q = vector_from(field(ll, "q", "lower_level"), "q");
    a.D = matrix_from(ll.value("D", json::array()), n, "D");
    a.E = matrix_from(ll.value("E", json::array()), m, "E");
    a.b = vector_from(ll.value("b", json::array()), "b");
    if (a.b.size() != ell) {
      throw Error(ErrorKind::DimensionMismatch,
                  "b has length " + std::to_string(a.b.size()) +
                      ", expected ell = " + std::to_string(ell));
    }
    lower = std::move(a);
  } else if (type == "polynomial") {
    PolynomialVi p;
    const json& fj = field(ll, "F", "lower_level");
    const json gj = ll.value("g", json::array());
    if (!fj.is_array() || !gj.is_array()) parse_error("F and g must be arrays");
    for (std::size_t i = 0; i < fj.size(); ++i) {
      p.F.push_back(polynomial_from(fj[i], vars, "F[" + std::to_string(i) + "]"));
    }
    for (std::size_t i = 0; i < gj.size(); ++i) {
      p.g.push_back(polynomial_from(gj[i], vars, "g[" + std::to_string(i) + "]"));
    }
    if (p.g.size() != ell) {
      throw Error(ErrorKind::DimensionMismatch,
                  "g has " + std::to_string(p.g.size()) +
                      " components, expected ell = " + std::to_string(ell));
    }
    lower = std::move(p);
  } else {
    throw Error(ErrorKind::UnknownLowerLevelType,
                "unknown lower-level type \"" + type + "\"");
  }

  std::optional<HPolyhedron> upper;
  if (j.contains("upper_set")) upper = polyhedron_from(j.at("upper_set"), n, "upper_set");
  std::optional<HPolyhedron> joint;
  if (j.contains("joint_set")) joint = polyhedron_from(j.at("joint_set"), vars, "joint_set");
  return make_instance(name, n, m, std::move(objective), std::move(lower),
                       std::move(upper), std::move(joint));
}

MpecInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open instance file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const MpecInstance& inst) {
  ordered_json j;
  j["name"] = inst.name();
  j["n"] = inst.n();
  j["m"] = inst.m();
  j["ell"] = inst.ell();
  j["objective"] = to_json(inst.objective());
  ordered_json ll;
  if (inst.is_affine()) {
    const auto& a = inst.affine();
    ll["type"] = "affine";
    ll["P"] = to_json(a.P);
    ll["Q"] = to_json(a.Q);
    ll["q"] = to_json(a.q);
    ll["D"] = to_json(a.D);
    ll["E"] = to_json(a.E);
    ll["b"] = to_json(a.b);
  } else {
    const auto& p = std::get<PolynomialVi>(inst.lower_level());
    ll["type"] = "polynomial";
    ll["F"] = ordered_json::array();
    for (const auto& f : p.F) ll["F"].push_back(to_json(f));
    ll["g"] = ordered_json::array();
    for (const auto& g : p.g) ll["g"].push_back(to_json(g));
  }
  j["lower_level"] = std::move(ll);
  j["upper_set"] = to_json(inst.upper_set());
  if (inst.joint_set()) j["joint_set"] = to_json(*inst.joint_set());
  return j.dump(2);
}

Polynomial restrict_to_y(const Polynomial& p, const Vector& x, std::size_t m) {
  const std::size_t n = x.size();
  if (p.num_vars() != n + m) {
    throw Error(ErrorKind::DimensionMismatch, "restrict_to_y dimensions");
  }
  Polynomial out(m);
  for (const auto& [e, c] : p.terms()) {
    Rational coef = c;
    for (std::size_t j = 0; j < n; ++j) {
      for (unsigned k = 0; k < e[j]; ++k) coef *= x[j];
    }
    out.add_term(coef, Exponents(e.begin() + static_cast<std::ptrdiff_t>(n), e.end()));
  }
  return out;
}

Vector parse_vector(std::string_view text) {
  Vector v;
  if (text.empty()) return v;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    std::string_view piece = text.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    v.push_back(Rational::parse(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return v;
}

}  // namespace mpeckit
