#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gspin/padic.hpp"

namespace gspin {

// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }
  void set_column(std::size_t j, const std::vector<T>& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }
  Matrix transpose() const {
    Matrix t;
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.data_.reserve(data_.size());
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i) t.data_.push_back((*this)(i, j));
    return t;
  }
  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows(), b.cols(), a.rows() && a.cols() ? a(0, 0) * 0 : T());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

using PMatrix = Matrix<PadicElement>;
using PVector = std::vector<PadicElement>;
using QMatrix = Matrix<mpq_class>;

PMatrix pmatrix_zero(int p, std::size_t rows, std::size_t cols, int f = 1, int precision = 0);
PMatrix pmatrix_identity(int p, std::size_t n, int f = 1, int precision = 0);
PMatrix to_padic(int p, const QMatrix& m, int f = 1, int precision = 0);

PMatrix operator*(const PMatrix& a, const PMatrix& b);
PMatrix operator+(const PMatrix& a, const PMatrix& b);
PMatrix operator-(const PMatrix& a, const PMatrix& b);
PMatrix scale(const PMatrix& a, const PadicElement& s);
PVector mat_vec(const PMatrix& a, const PVector& v);
PMatrix hconcat(const PMatrix& a, const PMatrix& b);
PMatrix columns(const std::vector<PVector>& cols, int p, std::size_t rows, int f = 1);
PMatrix frobenius(const PMatrix& a);
PMatrix embed(const PMatrix& a);

// Bilinear value x^T G y.
PadicElement bilinear(const PMatrix& gram, const PVector& x, const PVector& y);

// Minimum entry valuation (kZeroValuation for the zero matrix).
int min_valuation(const PMatrix& a);
bool is_integral(const PMatrix& a);

PadicElement determinant(const PMatrix& a);
// Throws Degenerate if singular at working precision.
PMatrix inverse(const PMatrix& a);
// Coordinates X with basis * X = vectors; basis has full column rank.
// Throws NotContained if some vector is outside the span.
PMatrix solve_in_span(const PMatrix& basis, const PMatrix& vectors);
// Column basis of the right kernel.
PMatrix kernel(const PMatrix& a);
int rank(const PMatrix& a);

// Canonical Z_p-basis (column Hermite form) of the module spanned by the
// columns of `generators`. Pivots are exact powers of p; entries above a
// pivot p^k are reduced to their digits below p^k. Output columns are
// ordered by pivot row.
PMatrix hermite_form(const PMatrix& generators);
// Valuations of the elementary divisors (Smith form over Z_p), ascending.
std::vector<int> elementary_divisor_valuations(const PMatrix& a);
// Rows of the pivots of a Hermite form.
std::vector<int> hermite_pivot_rows(const PMatrix& hermite);

// Deterministic textual key of a matrix.
std::string matrix_key(const PMatrix& a);

// Exact rational helpers.
QMatrix qmatrix_identity(std::size_t n);
// Rank and right-kernel over Q.
QMatrix qkernel(const QMatrix& a);
// X with a X = b for square a; none if a is singular.
std::optional<QMatrix> qsolve(const QMatrix& a, const QMatrix& b);
// p-adic valuations of the elementary divisors of a rational square matrix.
std::vector<int> elementary_divisor_valuations(const QMatrix& a, int p);
bool q_is_p_integral(const mpq_class& q, int p);
// Residue mod p of a p-integral rational.
int q_residue(const mpq_class& q, int p);

}  // namespace gspin
