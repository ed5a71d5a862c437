#include "mpeckit/linalg.hpp"

#include <numeric>
#include <sstream>
#include <utility>

#include "mpeckit/error.hpp"

namespace mpeckit {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::DimensionMismatch, what);
}

// Integer rows with the same row space orientation: each row is scaled by the
// positive lcm of its denominators.
std::vector<std::vector<mpz_class>> integer_rows(const Matrix& a) {
  std::vector<std::vector<mpz_class>> out(a.rows(),
                                          std::vector<mpz_class>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    mpz_class scale = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(),
              a(i, j).raw().get_den_mpz_t());
    }
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out[i][j] = a(i, j).raw().get_num() * (scale / a(i, j).raw().get_den());
    }
  }
  return out;
}

struct BareissResult {
  std::size_t rank = 0;
  int sign = 0;  // determinant sign, square input only
};

// Bareiss elimination with row and column pivoting. Every division is exact.
BareissResult bareiss(std::vector<std::vector<mpz_class>> m,
                      std::size_t cols) {
  const std::size_t rows = m.size();
  std::vector<std::size_t> colperm(cols);
  std::iota(colperm.begin(), colperm.end(), 0);
  int parity = 1;
  mpz_class prev = 1;
  std::size_t rank = 0;
  for (std::size_t k = 0; k < rows && k < cols; ++k) {
    std::size_t pr = rows, pc = cols;
    for (std::size_t j = k; j < cols && pr == rows; ++j) {
      for (std::size_t i = k; i < rows; ++i) {
        if (m[i][colperm[j]] != 0) {
          pr = i;
          pc = j;
          break;
        }
      }
    }
    if (pr == rows) break;
    if (pr != k) {
      std::swap(m[pr], m[k]);
      parity = -parity;
    }
    if (pc != k) {
      std::swap(colperm[pc], colperm[k]);
      parity = -parity;
    }
    const mpz_class& pivot = m[k][colperm[k]];
    for (std::size_t i = k + 1; i < rows; ++i) {
      for (std::size_t j = k + 1; j < cols; ++j) {
        mpz_class v = pivot * m[i][colperm[j]] -
                      m[i][colperm[k]] * m[k][colperm[j]];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i][colperm[j]] = v;
      }
      m[i][colperm[k]] = 0;
    }
    prev = pivot;
    ++rank;
  }
  BareissResult res;
  res.rank = rank;
  if (rows == cols) {
    if (rank < rows) {
      res.sign = 0;
    } else {
      res.sign = parity * sgn(m[rows - 1][colperm[rows - 1]]);
    }
  }
  return res;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(std::vector<Vector>& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const Rational inv = Rational(1) / m[r][c];
    for (auto& e : m[r]) e *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      const Rational f = m[i][c];
      for (std::size_t j = c; j < m[i].size(); ++j) {
        if (!m[r][j].is_zero()) m[i][j] -= f * m[r][j];
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == cols, "matrix row has wrong length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vector Matrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

std::vector<Vector> Matrix::row_list() const {
  std::vector<Vector> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix Matrix::select_rows(const IndexSet& rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t j = 0; j < cols_; ++j) out(k, j) = (*this)(rows[k], j);
  }
  return out;
}

void Matrix::append_row(const Vector& row) {
  require(row.size() == cols_ || rows_ == 0, "appended row has wrong length");
  if (rows_ == 0) cols_ = row.size();
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

Vector operator*(const Matrix& a, const Vector& v) {
  require(a.cols() == v.size(), "matrix-vector product");
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Rational s;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a(i, j).is_zero() && !v[j].is_zero()) s += a(i, j) * v[j];
    }
    out[i] = s;
  }
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matrix product");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (!b(k, j).is_zero()) out(i, j) += a(i, k) * b(k, j);
      }
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum");
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  }
  return out;
}

Matrix operator*(const Rational& s, const Matrix& a) {
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= s;
  }
  return out;
}

Vector operator+(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "vector sum");
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "vector difference");
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Vector operator-(const Vector& a) {
  Vector out = a;
  for (auto& e : out) e = -e;
  return out;
}

Vector operator*(const Rational& s, const Vector& v) {
  Vector out = v;
  for (auto& e : out) e *= s;
  return out;
}

Rational dot(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "dot product");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  }
  return s;
}

Rational norm1(const Vector& v) {
  Rational s;
  for (const auto& e : v) s += e.abs();
  return s;
}

bool is_zero(const Vector& v) {
  for (const auto& e : v) {
    if (!e.is_zero()) return false;
  }
  return true;
}

Vector zeros(std::size_t n) { return Vector(n); }

Vector unit_vector(std::size_t n, std::size_t k) {
  Vector v(n);
  v[k] = 1;
  return v;
}

Vector concat(const Vector& a, const Vector& b) {
  Vector out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::size_t rank_of(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  return bareiss(integer_rows(a), a.cols()).rank;
}

int det_sign(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::NonSquareMatrix, "det_sign of non-square matrix");
  }
  if (a.rows() == 0) return 1;
  // Row scaling by positive lcms leaves the sign unchanged.
  return bareiss(integer_rows(a), a.cols()).sign;
}

Rational determinant(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::NonSquareMatrix, "determinant of non-square matrix");
  }
  const std::size_t n = a.rows();
  std::vector<Vector> m = a.row_list();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k].is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != k) {
      std::swap(m[p], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k].is_zero()) continue;
      const Rational f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

std::optional<LinearSolution> solve_linear(const Matrix& a, const Vector& b) {
  require(a.rows() == b.size(), "linear system right-hand side");
  const std::size_t cols = a.cols();
  std::vector<Vector> aug;
  aug.reserve(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Vector r = a.row(i);
    r.push_back(b[i]);
    aug.push_back(std::move(r));
  }
  const auto pivots = rref(aug, cols);
  for (std::size_t i = pivots.size(); i < aug.size(); ++i) {
    if (!aug[i][cols].is_zero()) return std::nullopt;
  }
  LinearSolution sol;
  sol.particular = zeros(cols);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    sol.particular[pivots[r]] = aug[r][cols];
    is_pivot[pivots[r]] = true;
  }
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vector v = zeros(cols);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -aug[r][f];
    sol.null_basis.push_back(std::move(v));
  }
  return sol;
}

std::optional<Vector> solve_unique(const Matrix& a, const Vector& b) {
  auto sol = solve_linear(a, b);
  if (!sol || !sol->null_basis.empty()) return std::nullopt;
  return std::move(sol->particular);
}

std::vector<Vector> null_space(const Matrix& a, std::size_t cols) {
  if (a.rows() == 0) {
    std::vector<Vector> basis;
    for (std::size_t k = 0; k < cols; ++k) basis.push_back(unit_vector(cols, k));
    return basis;
  }
  require(a.cols() == cols, "null space column count");
  auto sol = solve_linear(a, zeros(a.rows()));
  return sol->null_basis;
}

bool is_psd(const Matrix& symmetric) {
  require(symmetric.rows() == symmetric.cols(), "PSD test needs square input");
  std::vector<Vector> m = symmetric.row_list();
  std::vector<bool> done(m.size(), false);
  for (;;) {
    std::size_t pivot = m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (done[i]) continue;
      if (m[i][i].sign() < 0) return false;
      if (m[i][i].sign() > 0 && pivot == m.size()) pivot = i;
    }
    if (pivot == m.size()) {
      // Remaining diagonal is zero: PSD iff the remaining block vanishes.
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
          if (!done[i] && !done[j] && !m[i][j].is_zero()) return false;
        }
      }
      return true;
    }
    done[pivot] = true;
    const Rational d = m[pivot][pivot];
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (done[i] || m[i][pivot].is_zero()) continue;
      const Rational f = m[i][pivot] / d;
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (!done[j]) m[i][j] -= f * m[pivot][j];
      }
    }
  }
}

Vector primitive_direction(const Vector& v) {
  if (is_zero(v)) return v;
  mpz_class lcm = 1;
  for (const auto& e : v) {
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.raw().get_den_mpz_t());
  }
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const auto& e : v) {
    mpz_class k = e.raw().get_num() * (lcm / e.raw().get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), k.get_mpz_t());
    ints.push_back(k);
  }
  Vector out;
  out.reserve(v.size());
  for (auto& k : ints) out.emplace_back(mpq_class(k / g));
  return out;
}

std::string to_string(const Vector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ')';
  return os.str();
}

}  // namespace mpeckit
