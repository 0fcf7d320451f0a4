#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "stackel/jets.hpp"

namespace stackel {

template <class S>
using Mat = std::vector<std::vector<S>>;

/// In-place Gaussian elimination on the first `cols` columns; returns the rank.
/// Pivots by value magnitude (on the exact tag any nonzero pivot is exact).
template <class T>
int row_reduce(Mat<T>& m, int cols) {
  int rows = static_cast<int>(m.size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int best = -1;
    double best_size = 0.0;
    for (int r = rank; r < rows; ++r) {
      if (value_is_zero(m[r][c])) continue;
      double sz = value_magnitude(m[r][c]);
      if (best < 0 || sz > best_size) {
        best = r;
        best_size = sz;
      }
    }
    if (best < 0) continue;
    std::swap(m[rank], m[best]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || value_is_zero(m[r][c])) continue;
      T factor = m[r][c] / m[rank][c];
      for (size_t k = c; k < m[r].size(); ++k) m[r][k] -= factor * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

template <class T>
int matrix_rank(Mat<T> m) {
  if (m.empty() || m[0].empty()) return 0;
  return row_reduce(m, static_cast<int>(m[0].size()));
}

/// Inverse via Gauss-Jordan; nullopt when the value part is singular.
template <class T>
std::optional<Mat<T>> mat_inverse(const Mat<T>& a) {
  int n = static_cast<int>(a.size());
  if (n == 0) return Mat<T>{};
  T zero = zero_like(a[0][0]);
  T one = one_like(a[0][0]);
  Mat<T> m = a;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m[r].push_back(r == c ? one : zero);
  if (row_reduce(m, n) < n) return std::nullopt;
  Mat<T> inv(n, std::vector<T>(n, zero));
  for (int r = 0; r < n; ++r) {
    int c = 0;
    while (c < n && value_is_zero(m[r][c])) ++c;
    for (int k = 0; k < n; ++k) inv[c][k] = m[r][n + k] / m[r][c];
  }
  return inv;
}

template <class T>
std::optional<std::vector<T>> solve_linear(const Mat<T>& a, const std::vector<T>& b) {
  int n = static_cast<int>(a.size());
  if (n == 0) return std::vector<T>{};
  Mat<T> m = a;
  for (int r = 0; r < n; ++r) m[r].push_back(b[r]);
  if (row_reduce(m, n) < n) return std::nullopt;
  std::vector<T> x(n, zero_like(b[0]));
  for (int r = 0; r < n; ++r) {
    int c = 0;
    while (c < n && value_is_zero(m[r][c])) ++c;
    if (c == n) continue;
    x[c] = m[r][n] / m[r][c];
  }
  return x;
}

template <class T>
T determinant(Mat<T> m) {
  int n = static_cast<int>(m.size());
  if (n == 0) throw std::invalid_argument("determinant of empty matrix");
  T det = one_like(m[0][0]);
  for (int c = 0; c < n; ++c) {
    int best = -1;
    for (int r = c; r < n; ++r)
      if (!value_is_zero(m[r][c])) {
        best = r;
        break;
      }
    if (best < 0) return zero_like(m[0][0]);
    if (best != c) {
      std::swap(m[best], m[c]);
      det = zero_like(det) - det;
    }
    det = det * m[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (value_is_zero(m[r][c])) continue;
      T factor = m[r][c] / m[c][c];
      for (int k = c; k < n; ++k) m[r][k] -= factor * m[c][k];
    }
  }
  return det;
}

}  // namespace stackel
