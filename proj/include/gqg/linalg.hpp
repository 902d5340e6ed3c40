#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "gqg/errors.hpp"

namespace gqg {

template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, T{}) {}

  T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

using RealMat = Mat<double>;
using ComplexMat = Mat<std::complex<double>>;
using ComplexVec = std::vector<std::complex<double>>;

inline double max_abs(const RealMat& m) {
  double w = 0.0;
  for (double v : m.a) w = std::max(w, std::fabs(v));
  return w;
}

// Rank by pivoted Gaussian elimination; pivots below tol (relative to the
// largest entry) do not count.
inline int matrix_rank(RealMat m, double tol = 1e-12) {
  const double scale = max_abs(m);
  if (scale == 0.0) return 0;
  const double threshold = tol * scale;
  int rank = 0;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int pivot = row;
    for (int i = row + 1; i < m.rows; ++i) {
      if (std::fabs(m(i, col)) > std::fabs(m(pivot, col))) pivot = i;
    }
    if (std::fabs(m(pivot, col)) <= threshold) continue;
    if (pivot != row) {
      for (int j = 0; j < m.cols; ++j) std::swap(m(pivot, j), m(row, j));
    }
    for (int i = row + 1; i < m.rows; ++i) {
      const double f = m(i, col) / m(row, col);
      for (int j = col; j < m.cols; ++j) m(i, j) -= f * m(row, j);
    }
    ++row;
    ++rank;
  }
  return rank;
}

// LU with partial pivoting; used as the elimination-based determinant oracle.
inline std::complex<double> determinant(ComplexMat m) {
  if (m.rows != m.cols) throw ShapeError("determinant: matrix must be square");
  const int n = m.rows;
  std::complex<double> det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int i = col + 1; i < n; ++i) {
      if (std::abs(m(i, col)) > std::abs(m(pivot, col))) pivot = i;
    }
    if (std::abs(m(pivot, col)) == 0.0) return 0.0;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (int i = col + 1; i < n; ++i) {
      const std::complex<double> f = m(i, col) / m(col, col);
      for (int j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

/// Null vector by Gaussian elimination with full pivoting. Returns nullopt
/// when the matrix is numerically full-rank (no pivot falls below rel_tol
/// times the largest pivot). The result is unit-norm with the first
/// significant component made real positive, so repeated calls are bitwise
/// identical.
inline std::optional<ComplexVec> null_vector(ComplexMat m, double rel_tol = 1e-10) {
  if (m.rows != m.cols) throw ShapeError("null_vector: matrix must be square");
  const int n = m.rows;
  std::vector<int> col_of(n);
  for (int j = 0; j < n; ++j) col_of[j] = j;

  double first_pivot = 0.0;
  int rank = 0;
  for (int k = 0; k < n; ++k) {
    int pr = k, pc = k;
    double best = 0.0;
    for (int i = k; i < n; ++i) {
      for (int j = k; j < n; ++j) {
        const double v = std::abs(m(i, j));
        if (v > best) {
          best = v;
          pr = i;
          pc = j;
        }
      }
    }
    if (k == 0) first_pivot = best;
    if (best == 0.0 || (k > 0 && best < rel_tol * first_pivot)) break;
    if (pr != k) {
      for (int j = 0; j < n; ++j) std::swap(m(pr, j), m(k, j));
    }
    if (pc != k) {
      for (int i = 0; i < n; ++i) std::swap(m(i, pc), m(i, k));
      std::swap(col_of[pc], col_of[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      const std::complex<double> f = m(i, k) / m(k, k);
      for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
    ++rank;
  }
  if (rank == n) return std::nullopt;

  // Free variable: the first non-pivot column (permuted index `rank`).
  ComplexVec xp(static_cast<std::size_t>(n), 0.0);
  xp[static_cast<std::size_t>(rank)] = 1.0;
  for (int i = rank - 1; i >= 0; --i) {
    std::complex<double> sum = 0.0;
    for (int j = i + 1; j < n; ++j) sum += m(i, j) * xp[static_cast<std::size_t>(j)];
    xp[static_cast<std::size_t>(i)] = -sum / m(i, i);
  }

  ComplexVec x(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(col_of[j])] = xp[static_cast<std::size_t>(j)];

  double norm = 0.0;
  double largest = 0.0;
  for (const auto& v : x) {
    norm += std::norm(v);
    largest = std::max(largest, std::abs(v));
  }
  norm = std::sqrt(norm);
  for (auto& v : x) v /= norm;
  largest /= norm;
  for (const auto& v : x) {
    if (std::abs(v) > 1e-12 * std::max(1.0, largest)) {
      const std::complex<double> phase = std::conj(v) / std::abs(v);
      for (auto& w : x) w *= phase;
      break;
    }
  }
  return x;
}

inline double residual_norm(const ComplexMat& m, const ComplexVec& x) {
  double out = 0.0;
  for (int i = 0; i < m.rows; ++i) {
    std::complex<double> sum = 0.0;
    for (int j = 0; j < m.cols; ++j) sum += m(i, j) * x[static_cast<std::size_t>(j)];
    out += std::norm(sum);
  }
  return std::sqrt(out);
}

}  // namespace gqg
