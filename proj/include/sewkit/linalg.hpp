#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sewkit/rational.hpp"

namespace sewkit {

template <class R>
using Vec = std::vector<R>;

/// Dense row-major matrix over a commutative ring R.
template <class R>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, R(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = R(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  R& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const R& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const R& s) { return a *= s; }
  friend Matrix operator*(const R& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const R& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Vec<R> operator*(const Matrix& a, const Vec<R>& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
    Vec<R> out(a.rows_, R(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        if (!is_zero(a(i, j))) out[i] += a(i, j) * v[j];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_zero_matrix() const {
    return std::all_of(data_.begin(), data_.end(), [](const R& x) { return is_zero(x); });
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<R> data_;
};

template <class R>
bool is_zero(const Matrix<R>& m) {
  return m.is_zero_matrix();
}

template <class R>
bool is_zero(const Vec<R>& v) {
  return std::all_of(v.begin(), v.end(), [](const R& x) { return is_zero(x); });
}

template <class R>
Vec<R>& operator+=(Vec<R>& a, const Vec<R>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sum: shape mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <class R>
Vec<R>& operator-=(Vec<R>& a, const Vec<R>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector difference: shape mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <class R>
Vec<R> operator+(Vec<R> a, const Vec<R>& b) {
  return a += b;
}
template <class R>
Vec<R> operator-(Vec<R> a, const Vec<R>& b) {
  return a -= b;
}
template <class R>
Vec<R> operator*(const R& s, Vec<R> v) {
  for (auto& x : v) x *= s;
  return v;
}
template <class R>
Vec<R> operator*(Vec<R> v, const R& s) {
  for (auto& x : v) x *= s;
  return v;
}
template <class R>
Vec<R> operator-(Vec<R> v) {
  for (auto& x : v) x = -x;
  return v;
}

// Norms. The max-row-sum norm is the operator norm induced by the sup norm on
// vectors, so |Mv| <= |M||v| and |MN| <= |M||N| hold exactly.

inline Scalar sup_norm(const Vec<Scalar>& v) {
  Scalar m = 0;
  for (const auto& x : v) m = std::max(m, abs(x));
  return m;
}

inline Scalar row_sum_norm(const Matrix<Scalar>& a) {
  Scalar m = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Scalar s = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

/// Reduced row echelon data of a rational matrix: pivots are chosen column by
/// column from the left, so the free columns are deterministic.
struct Echelon {
  Matrix<Scalar> reduced;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> free_cols;
};

inline Echelon echelon(Matrix<Scalar> a) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && is_zero(a(piv, col))) ++piv;
    if (piv == a.rows()) {
      e.free_cols.push_back(col);
      continue;
    }
    if (piv != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    Scalar inv = 1 / a(row, col);
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || is_zero(a(i, col))) continue;
      Scalar f = a(i, col);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    e.pivot_cols.push_back(col);
    ++row;
  }
  for (std::size_t col = e.pivot_cols.empty() ? 0 : e.pivot_cols.back() + 1; col < a.cols(); ++col)
    if (std::find(e.free_cols.begin(), e.free_cols.end(), col) == e.free_cols.end()) e.free_cols.push_back(col);
  std::sort(e.free_cols.begin(), e.free_cols.end());
  e.reduced = std::move(a);
  return e;
}

/// Solves a x = b with the free (non-pivot) components of x set to `free_values`
/// (in increasing column order). Returns nullopt when b is not in the range.
inline std::optional<Vec<Scalar>> solve_with_free(const Matrix<Scalar>& a, const Vec<Scalar>& b,
                                                  const Vec<Scalar>& free_values) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve: shape mismatch");
  Matrix<Scalar> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Echelon e = echelon(aug);
  // A pivot in the augmented column means inconsistency.
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == a.cols()) return std::nullopt;
  std::vector<std::size_t> free_cols;
  for (auto c : e.free_cols)
    if (c < a.cols()) free_cols.push_back(c);
  if (free_values.size() != free_cols.size()) throw std::invalid_argument("solve: wrong number of free values");
  Vec<Scalar> x(a.cols(), Scalar(0));
  for (std::size_t k = 0; k < free_cols.size(); ++k) x[free_cols[k]] = free_values[k];
  for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) {
    std::size_t pc = e.pivot_cols[r];
    Scalar v = e.reduced(r, a.cols());
    for (auto fc : free_cols) v -= e.reduced(r, fc) * x[fc];
    x[pc] = v;
  }
  return x;
}

/// Free columns of a (the kernel dimension and which components are seeds).
inline std::vector<std::size_t> free_columns(const Matrix<Scalar>& a) { return echelon(a).free_cols; }

inline Matrix<Scalar> inverse(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: not square");
  std::size_t n = a.rows();
  Matrix<Scalar> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  Echelon e = echelon(aug);
  for (std::size_t i = 0; i < n; ++i)
    if (i >= e.pivot_cols.size() || e.pivot_cols[i] != i) throw std::domain_error("inverse: singular matrix");
  Matrix<Scalar> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

}  // namespace sewkit
