#include "coverforge/linalg.hpp"

#include <utility>

namespace coverforge {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorKind::Malformed, "ragged matrix row " + std::to_string(i));
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector shape mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

namespace {

Matrix combine(const Matrix& a, const Matrix& b, int sign) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::DimensionMismatch, "matrix sum shape mismatch");
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += sign * b(i, j);
  return c;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) { return combine(a, b, 1); }
Matrix operator-(const Matrix& a, const Matrix& b) { return combine(a, b, -1); }

Matrix scaled(const Matrix& a, const Rational& s) {
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

Matrix hstack(const std::vector<Matrix>& blocks, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw Error(ErrorKind::DimensionMismatch, "hstack row mismatch");
    cols += b.cols();
  }
  Matrix m(rows, cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, off + j) = b(i, j);
    off += b.cols();
  }
  return m;
}

Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw Error(ErrorKind::DimensionMismatch, "vstack column mismatch");
    rows += b.rows();
  }
  Matrix m(rows, cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < cols; ++j) m(off + i, j) = b(i, j);
    off += b.rows();
  }
  return m;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

std::size_t rank(const Matrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  std::vector<mpz_class> a(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    mpz_class den = 1;
    for (std::size_t j = 0; j < c; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < c; ++j) a[i * c + j] = m(i, j).get_num() * (den / m(i, j).get_den());
  }
  auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return a[i * c + j]; };
  mpz_class prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    std::size_t p = row;
    while (p < r && at(p, col) == 0) ++p;
    if (p == r) continue;
    if (p != row)
      for (std::size_t j = 0; j < c; ++j) std::swap(at(p, j), at(row, j));
    for (std::size_t i = row + 1; i < r; ++i) {
      for (std::size_t j = col + 1; j < c; ++j) {
        at(i, j) = at(row, col) * at(i, j) - at(i, col) * at(row, j);
        mpz_divexact(at(i, j).get_mpz_t(), at(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      at(i, col) = 0;
    }
    prev = at(row, col);
    ++row;
  }
  return row;
}

Matrix kernel(const Matrix& m) {
  Matrix r = m;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  Matrix k(m.cols(), m.cols() - pivots.size());
  std::size_t col = 0;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    k(free, col) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) k(pivots[i], col) = -r(i, free);
    ++col;
  }
  return k;
}

std::optional<Vector> solve(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw Error(ErrorKind::DimensionMismatch, "right-hand side size mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
  return x;
}

Matrix solve_exact(const Matrix& a, const Matrix& b) {
  if (rank(a) != a.cols()) throw Error(ErrorKind::InvalidArgument, "solve_exact needs full column rank");
  Matrix x(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto col = solve(a, b.column(j));
    if (!col) throw Error(ErrorKind::InvalidArgument, "inconsistent system in solve_exact");
    for (std::size_t i = 0; i < a.cols(); ++i) x(i, j) = (*col)[i];
  }
  return x;
}

std::optional<std::size_t> column_outside(const Matrix& a, const Matrix& b) {
  const std::size_t base = rank(a);
  if (rank(hstack({a, b}, a.rows())) == base) return std::nullopt;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    Matrix one(b.rows(), 1);
    for (std::size_t i = 0; i < b.rows(); ++i) one(i, 0) = b(i, j);
    if (rank(hstack({a, one}, a.rows())) > base) return j;
  }
  return std::nullopt;
}

}  // namespace coverforge
