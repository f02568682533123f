#pragma once

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qshape/field.hpp"

namespace qshape {

template <class F>
using Vec = std::vector<Elem<F>>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class F>
Vec<F> zero_vec(const F& field, std::size_t n) {
  return Vec<F>(n, field.zero());
}

template <class F>
Vec<F> unit_vec(const F& field, std::size_t n, std::size_t i) {
  Vec<F> v(n, field.zero());
  v[i] = field.one();
  return v;
}

template <class F>
bool is_zero_vec(const Vec<F>& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

template <class F>
void axpy(Vec<F>& y, const Elem<F>& a, const Vec<F>& x) {
  assert(y.size() == x.size());
  if (is_zero(a)) return;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!is_zero(x[i])) y[i] += a * x[i];
}

/// Dense row-major matrix over F. A matrix with `rows()` = m and `cols()` = n
/// represents a linear map F^n -> F^m acting on column vectors.
template <class F>
class Matrix {
 public:
  using Element = Elem<F>;

  Matrix() = default;
  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  static Matrix from_rows(const F& field, std::size_t cols, const std::vector<Vec<F>>& rows) {
    Matrix m(field, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionError("row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const F& field, std::size_t rows, const std::vector<Vec<F>>& cols) {
    Matrix m(field, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionError("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Element& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Element& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<Element>& entries() const { return data_; }

  Vec<F> row(std::size_t i) const { return Vec<F>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  Vec<F> column(std::size_t j) const {
    Vec<F> v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }
  std::vector<Vec<F>> columns() const {
    std::vector<Vec<F>> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!qshape::is_zero(x)) return false;
    return true;
  }

  Vec<F> apply(const Vec<F>& v) const {
    if (v.size() != cols_) throw DimensionError("matrix-vector dimension mismatch");
    Vec<F> out(rows_, field_.zero());
    for (std::size_t j = 0; j < cols_; ++j) {
      if (qshape::is_zero(v[j])) continue;
      for (std::size_t i = 0; i < rows_; ++i) {
        const auto& a = (*this)(i, j);
        if (!qshape::is_zero(a)) out[i] += a * v[j];
      }
    }
    return out;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix scaled(const Element& s) const {
    Matrix m = *this;
    for (auto& x : m.data_) x *= s;
    return m;
  }

  Matrix operator-() const { return scaled(-field_.one()); }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionError("matrix product dimension mismatch: " + std::to_string(a.rows_) + "x" +
                           std::to_string(a.cols_) + " * " + std::to_string(b.rows_) + "x" +
                           std::to_string(b.cols_));
    Matrix c(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const auto& aik = a(i, k);
        if (qshape::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const auto& bkj = b(k, j);
          if (!qshape::is_zero(bkj)) c(i, j) += aik * bkj;
        }
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
    Matrix m(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionError("block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix select_columns(const std::vector<std::size_t>& idx) const {
    Matrix m(field_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }

  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(field_, idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
    return m;
  }

  static Matrix hstack(const F& field, std::size_t rows, const std::vector<Matrix>& parts) {
    std::size_t c = 0;
    for (const auto& p : parts) {
      if (p.rows_ != rows) throw DimensionError("hstack row mismatch");
      c += p.cols_;
    }
    Matrix m(field, rows, c);
    std::size_t off = 0;
    for (const auto& p : parts) {
      m.set_block(0, off, p);
      off += p.cols_;
    }
    return m;
  }

  static Matrix vstack(const F& field, std::size_t cols, const std::vector<Matrix>& parts) {
    std::size_t r = 0;
    for (const auto& p : parts) {
      if (p.cols_ != cols) throw DimensionError("vstack column mismatch");
      r += p.rows_;
    }
    Matrix m(field, r, cols);
    std::size_t off = 0;
    for (const auto& p : parts) {
      m.set_block(off, 0, p);
      off += p.rows_;
    }
    return m;
  }

  static Matrix block_diagonal(const F& field, const std::vector<Matrix>& parts) {
    std::size_t r = 0, c = 0;
    for (const auto& p : parts) {
      r += p.rows_;
      c += p.cols_;
    }
    Matrix m(field, r, c);
    std::size_t ro = 0, co = 0;
    for (const auto& p : parts) {
      m.set_block(ro, co, p);
      ro += p.rows_;
      co += p.cols_;
    }
    return m;
  }

  /// Kronecker product a (x) b with index (i_a * rows_b + i_b, j_a * cols_b + j_b).
  static Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix m(a.field_, a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) {
        const auto& x = a(i, j);
        if (qshape::is_zero(x)) continue;
        for (std::size_t k = 0; k < b.rows_; ++k)
          for (std::size_t l = 0; l < b.cols_; ++l) m(i * b.rows_ + k, j * b.cols_ + l) = x * b(k, l);
      }
    return m;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
  }

  F field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

}  // namespace qshape
