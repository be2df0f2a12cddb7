#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "gpach/scalars.hpp"

namespace gpach {

template <class S>
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<S> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, S(0)) {}

  S& at(int r, int c) { return a[std::size_t(r) * cols + c]; }
  const S& at(int r, int c) const { return a[std::size_t(r) * cols + c]; }

  Matrix transposed() const {
    Matrix t(cols, rows);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("Matrix: shape mismatch");
    Matrix p(x.rows, y.cols);
    for (int r = 0; r < x.rows; ++r)
      for (int k = 0; k < x.cols; ++k) {
        if (x.at(r, k).is_zero()) continue;
        for (int c = 0; c < y.cols; ++c) p.at(r, c) += x.at(r, k) * y.at(k, c);
      }
    return p;
  }

  bool is_zero() const {
    for (const S& v : a)
      if (!v.is_zero()) return false;
    return true;
  }
};

namespace detail {

// Pivot threshold: exact backend pivots on any nonzero entry (first in column order);
// float backend takes the max-modulus entry above an absolute threshold scaled to the input.
template <class S>
double pivot_floor(const Matrix<S>& m, const Tolerance& tol) {
  if constexpr (is_exact_v<S>) {
    (void)m, (void)tol;
    return 0;
  } else {
    double scale = 0;
    for (const S& v : m.a) scale = std::max(scale, v.abs_approx());
    return tol.zero * std::max(1.0, scale);
  }
}

}  // namespace detail

// Row-reduce in place; returns pivot column list. Deterministic per backend.
template <class S>
std::vector<int> row_reduce(Matrix<S>& m, const Tolerance& tol = {}) {
  const double floor = detail::pivot_floor(m, tol);
  std::vector<int> pivot_cols;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int pivot = -1;
    if constexpr (is_exact_v<S>) {
      for (int r = row; r < m.rows; ++r)
        if (!m.at(r, col).is_zero()) {
          pivot = r;
          break;
        }
    } else {
      double best = floor;
      for (int r = row; r < m.rows; ++r) {
        double v = m.at(r, col).abs_approx();
        if (v > best) {
          best = v;
          pivot = r;
        }
      }
    }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(row, c));
    S inv = S(1) / m.at(row, col);
    for (int c = col; c < m.cols; ++c) m.at(row, c) *= inv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == row) continue;
      S factor = m.at(r, col);
      if (factor.is_zero()) continue;
      for (int c = col; c < m.cols; ++c) m.at(r, c) -= factor * m.at(row, c);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return pivot_cols;
}

template <class S>
int rank(Matrix<S> m, const Tolerance& tol = {}) {
  return int(row_reduce(m, tol).size());
}

// Basis of the right kernel, one vector per free column, in column order.
template <class S>
std::vector<std::vector<S>> kernel_basis(Matrix<S> m, const Tolerance& tol = {}) {
  std::vector<int> pivots = row_reduce(m, tol);
  std::vector<bool> is_pivot(std::size_t(m.cols), false);
  for (int c : pivots) is_pivot[std::size_t(c)] = true;
  std::vector<std::vector<S>> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[std::size_t(free)]) continue;
    std::vector<S> v(std::size_t(m.cols), S(0));
    v[std::size_t(free)] = S(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[std::size_t(pivots[i])] = -m.at(int(i), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class S>
std::optional<Matrix<S>> inverse_matrix(const Matrix<S>& m, const Tolerance& tol = {}) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse_matrix: not square");
  Matrix<S> aug(m.rows, 2 * m.cols);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols + r) = S(1);
  }
  std::vector<int> pivots = row_reduce(aug, tol);
  if (int(pivots.size()) != m.rows) return std::nullopt;
  for (std::size_t i = 0; i < pivots.size(); ++i)
    if (pivots[i] != int(i)) return std::nullopt;
  Matrix<S> inv(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) inv.at(r, c) = aug.at(r, m.cols + c);
  return inv;
}

}  // namespace gpach
