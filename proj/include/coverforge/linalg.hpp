#pragma once

#include <optional>
#include <vector>

#include "coverforge/rational.hpp"

namespace coverforge {

using Vector = std::vector<Rational>;

/// Dense row-major rational matrix. Zero-sized dimensions are allowed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const;
  Vector column(std::size_t j) const;
  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix scaled(const Matrix& a, const Rational& s);

Matrix hstack(const std::vector<Matrix>& blocks, std::size_t rows);
Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols);
/// Block diagonal.
Matrix direct_sum(const Matrix& a, const Matrix& b);

/// Fraction-free (Bareiss) elimination after clearing row denominators.
std::size_t rank(const Matrix& m);
/// Columns form a basis of the null space.
Matrix kernel(const Matrix& m);
/// Some x with m x = b.
std::optional<Vector> solve(const Matrix& m, const Vector& b);
/// Unique X with a X = b; a must have full column rank and the system must be
/// consistent.
Matrix solve_exact(const Matrix& a, const Matrix& b);
/// First column of `b` outside the column space of `a`.
std::optional<std::size_t> column_outside(const Matrix& a, const Matrix& b);

}  // namespace coverforge
