#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mpeckit/rational.hpp"

namespace mpeckit {

using Vector = std::vector<Rational>;
using IndexSet = std::vector<std::size_t>;

// Dense row-major rational matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  // All rows must have length `cols`.
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Vector row(std::size_t i) const;
  Vector col(std::size_t j) const;
  std::vector<Vector> row_list() const;
  Matrix transpose() const;
  Matrix select_rows(const IndexSet& rows) const;
  void append_row(const Vector& row);

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Vector operator*(const Matrix& a, const Vector& v);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator*(const Rational& s, const Matrix& a);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator-(const Vector& a);
Vector operator*(const Rational& s, const Vector& v);

Rational dot(const Vector& a, const Vector& b);
Rational norm1(const Vector& v);
bool is_zero(const Vector& v);
Vector zeros(std::size_t n);
Vector unit_vector(std::size_t n, std::size_t k);
Vector concat(const Vector& a, const Vector& b);

// Rank by fraction-free (Bareiss) elimination on the row-scaled integer
// matrix.
std::size_t rank_of(const Matrix& a);

// Sign of the determinant; the 0x0 matrix has determinant +1.
int det_sign(const Matrix& a);
Rational determinant(const Matrix& a);

// General solution x = particular + span(null_basis) of A x = b, or nullopt
// when inconsistent.
struct LinearSolution {
  Vector particular;
  std::vector<Vector> null_basis;
};
std::optional<LinearSolution> solve_linear(const Matrix& a, const Vector& b);

// Unique solution of A x = b, or nullopt when inconsistent or rank deficient.
std::optional<Vector> solve_unique(const Matrix& a, const Vector& b);

// Basis of {x : A x = 0}; for an m x d matrix every basis vector has length d.
std::vector<Vector> null_space(const Matrix& a, std::size_t cols);

// Exact positive-semidefiniteness test for a symmetric matrix.
bool is_psd(const Matrix& symmetric);

// Smallest positive multiple with coprime integer entries; zero stays zero.
Vector primitive_direction(const Vector& v);

std::string to_string(const Vector& v);

}  // namespace mpeckit
