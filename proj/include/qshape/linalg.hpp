#pragma once

// Exact dense linear algebra: echelon forms, kernels, solving, ranks and
// quotient maps. Echelon forms pick the leftmost pivot column and the topmost
// usable row, so every basis returned here is reproducible.

#include <algorithm>
#include <optional>
#include <vector>

#include "qshape/matrix.hpp"

namespace qshape {

template <class F>
struct Echelon {
  Matrix<F> reduced;                // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of row i, i < rank
  std::size_t rank() const { return pivots.size(); }
};

template <class F>
Echelon<F> rref(Matrix<F> m) {
  const F& field = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && is_zero(m(sel, c))) ++sel;
    if (sel == m.rows()) continue;
    m.swap_rows(r, sel);
    const auto inv = field.inverse(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!is_zero(m(r, j))) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      const auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!is_zero(m(r, j))) m(i, j) -= factor * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  if (m.empty()) return 0;
  return rref(m).rank();
}

/// Basis of {v : Mv = 0}; one vector per free column, with a 1 in that column
/// and zeros in the other free columns.
template <class F>
std::vector<Vec<F>> kernel_basis(const Matrix<F>& m) {
  const F& field = m.field();
  std::vector<Vec<F>> basis;
  if (m.cols() == 0) return basis;
  if (m.rows() == 0) {
    for (std::size_t j = 0; j < m.cols(); ++j) basis.push_back(unit_vec(field, m.cols(), j));
    return basis;
  }
  const auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec<F> v(m.cols(), field.zero());
    v[f] = field.one();
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Kernel basis as the columns of a matrix.
template <class F>
Matrix<F> kernel_matrix(const Matrix<F>& m) {
  return Matrix<F>::from_columns(m.field(), m.cols(), kernel_basis(m));
}

/// Some x with Mx = b, namely the one vanishing on non-pivot columns.
template <class F>
std::optional<Vec<F>> solve(const Matrix<F>& m, const Vec<F>& b) {
  if (b.size() != m.rows()) throw DimensionError("solve: right-hand side has wrong length");
  const F& field = m.field();
  Matrix<F> aug(field, m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = b[i];
  const auto e = rref(std::move(aug));
  Vec<F> x(m.cols(), field.zero());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == m.cols()) return std::nullopt;
    x[e.pivots[i]] = e.reduced(i, m.cols());
  }
  return x;
}

/// Some X with M X = B (column by column), or nothing if inconsistent.
template <class F>
std::optional<Matrix<F>> solve_matrix(const Matrix<F>& m, const Matrix<F>& b) {
  if (b.rows() != m.rows()) throw DimensionError("solve_matrix: row mismatch");
  const F& field = m.field();
  Matrix<F> aug(field, m.rows(), m.cols() + b.cols());
  aug.set_block(0, 0, m);
  aug.set_block(0, m.cols(), b);
  const auto e = rref(std::move(aug));
  Matrix<F> x(field, m.cols(), b.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] >= m.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[i], j) = e.reduced(i, m.cols() + j);
  }
  return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (m.rows() == 0) return m;
  auto x = solve_matrix(m, Matrix<F>::identity(m.field(), m.rows()));
  if (!x) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  return x;
}

template <class F>
bool is_invertible(const Matrix<F>& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

/// Rank of a set of vectors of length n.
template <class F>
std::size_t span_rank(const F& field, std::size_t n, const std::vector<Vec<F>>& vs) {
  if (vs.empty() || n == 0) return 0;
  for (const auto& v : vs)
    if (v.size() != n) throw DimensionError("vector length differs from ambient dimension");
  return rank(Matrix<F>::from_rows(field, n, vs));
}

/// dim(span U / (span U intersect span W)) = rank(U u W) - rank(W).
template <class F>
std::size_t subquotient_dim(const F& field, std::size_t ambient, const std::vector<Vec<F>>& u,
                            const std::vector<Vec<F>>& w) {
  std::vector<Vec<F>> both = u;
  both.insert(both.end(), w.begin(), w.end());
  return span_rank(field, ambient, both) - span_rank(field, ambient, w);
}

/// Columns of m forming a basis of its column space (leftmost choice).
template <class F>
Matrix<F> column_space(const Matrix<F>& m) {
  if (m.empty()) return Matrix<F>(m.field(), m.rows(), 0);
  return m.select_columns(rref(m).pivots);
}

/// Basis (as columns) of the span of the given columns, in reduced form.
template <class F>
Matrix<F> span_basis(const Matrix<F>& cols) {
  return column_space(cols);
}

/// A subspace W of F^n presented by a basis, together with a complement made
/// of standard basis vectors and the induced coordinate maps.
template <class F>
class Quotient {
 public:
  Quotient() = default;

  /// `sub` columns span W (need not be independent).
  Quotient(const F& field, std::size_t ambient, const Matrix<F>& sub) : ambient_(ambient) {
    Matrix<F> w = sub.cols() == 0 ? Matrix<F>(field, ambient, 0) : column_space(sub);
    sub_dim_ = w.cols();
    // Extend by standard vectors: take pivots of [W | I].
    Matrix<F> ext = Matrix<F>::hstack(field, ambient, {w, Matrix<F>::identity(field, ambient)});
    const auto e = rref(ext);
    std::vector<std::size_t> comp;
    for (auto p : e.pivots)
      if (p >= sub_dim_) comp.push_back(p - sub_dim_);
    complement_ = Matrix<F>(field, ambient, comp.size());
    for (std::size_t j = 0; j < comp.size(); ++j) complement_(comp[j], j) = field.one();
    Matrix<F> full = Matrix<F>::hstack(field, ambient, {w, complement_});
    auto inv = inverse(full);
    if (!inv) throw std::logic_error("Quotient: basis extension failed");
    projection_ = inv->block(sub_dim_, 0, comp.size(), ambient);
    sub_coords_ = inv->block(0, 0, sub_dim_, ambient);
    sub_basis_ = std::move(w);
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t sub_dim() const { return sub_dim_; }
  std::size_t dim() const { return ambient_ - sub_dim_; }
  /// (dim) x (ambient): kernel is exactly W.
  const Matrix<F>& projection() const { return projection_; }
  /// (ambient) x (dim): a section of the projection.
  const Matrix<F>& section() const { return complement_; }
  const Matrix<F>& sub_basis() const { return sub_basis_; }
  /// Coordinates in the W basis of a vector known to lie in W.
  const Matrix<F>& sub_coordinates() const { return sub_coords_; }

 private:
  std::size_t ambient_ = 0;
  std::size_t sub_dim_ = 0;
  Matrix<F> projection_;
  Matrix<F> complement_;
  Matrix<F> sub_basis_;
  Matrix<F> sub_coords_;
};

}  // namespace qshape
