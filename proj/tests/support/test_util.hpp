#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gsgd/dense_kernels.hpp"
#include "gsgd/dense_matrix.hpp"
#include "gsgd/factors.hpp"

namespace gsgd::testutil {

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (std::size_t k = 0; k < m.size(); ++k) m.data()[k] = normal(rng);
  return m;
}

// Random symmetric matrix assembled as Q diag(eigs) Q^T from a random
// orthonormal Q; the construct-then-decompose oracle.
inline DenseMatrix symmetric_from_spectrum(const std::vector<double>& eigs,
                                           std::uint64_t seed) {
  const std::size_t n = eigs.size();
  const DenseMatrix q = orthonormal_columns(random_matrix(n, n, seed));
  DenseMatrix scaled = q;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) scaled(i, k) *= eigs[k];
  return matmul_a_bt(scaled, q);
}

inline DenseMatrix random_rank_r(std::size_t m, std::size_t n, std::size_t r,
                                 std::uint64_t seed) {
  return matmul_a_bt(random_matrix(m, r, seed), random_matrix(n, r, seed + 1));
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return max_abs(a - b);
}

inline double orthonormality_error(const DenseMatrix& q) {
  const DenseMatrix g = matmul_at_b(q, q);
  return max_abs(g - DenseMatrix::identity(q.cols()));
}

// Least-squares line fit: returns (slope, r_squared) of y against x.
inline std::pair<double, double> line_fit(const std::vector<double>& x,
                                          const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return {slope, r2};
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace gsgd::testutil
