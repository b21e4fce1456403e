#pragma once

// Dense row-major matrices over exact rings, and the exact linear algebra the
// lattice and form code needs (determinants, inverses, kernels, Hermite and
// Smith normal forms).

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qflat/arith.hpp"

namespace qflat {

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw std::invalid_argument("matrix: data size mismatch");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  void set_row(std::size_t i, const std::vector<T>& r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix: shape mismatch in product");
    Matrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
      }
    return out;
  }

  Matrix scaled(const T& s) const {
    Matrix out = *this;
    for (auto& x : out.data_) x *= s;
    return out;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using IntegerMatrix = Matrix<Integer>;
using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;

class LinearAlgebraError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Rational determinant(const RationalMatrix& m);
Integer determinant(const IntegerMatrix& m);
std::size_t rank(const RationalMatrix& m);
/// Throws LinearAlgebraError when singular.
RationalMatrix inverse(const RationalMatrix& m);
bool is_symmetric(const RationalMatrix& m);

RationalMatrix to_rational(const IntegerMatrix& m);
/// Entrywise numerators after scaling by the least common denominator; returns the scale.
Integer common_denominator(const RationalMatrix& m);
IntegerMatrix to_integer(const RationalMatrix& m);  // throws if an entry is not integral

RationalVector mat_vec(const RationalMatrix& m, const RationalVector& v);
/// x^T m y
Rational bilinear(const RationalMatrix& m, const RationalVector& x, const RationalVector& y);

/// Row Hermite normal form of an integer matrix: upper echelon, positive pivots,
/// entries above each pivot reduced into [0, pivot). Zero rows are dropped.
IntegerMatrix hermite_normal_form(const IntegerMatrix& m);

/// Rows spanning {c in Z^k : sum_i c_i a_i = 0} (rank k-1 when a != 0).
IntegerMatrix integer_kernel(const IntegerVector& a);

/// Nonzero invariant factors e_1 | e_2 | ... of an integer matrix.
std::vector<Integer> smith_invariants(const IntegerMatrix& m);

}  // namespace qflat
