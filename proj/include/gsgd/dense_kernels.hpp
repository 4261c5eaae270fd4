#pragma once

#include <cstdint>
#include <vector>

#include "gsgd/dense_matrix.hpp"

namespace gsgd {

// Contract tolerances, shared by implementation and tests.
namespace tol {
inline constexpr double kSymmetryRel = 1e-12;         // sym_eigen input check
inline constexpr double kOrthonormalityMax = 1e-10;   // max |Q^T Q - I|
inline constexpr double kEigenReconstructRel = 1e-8;  // max |Q L Q^T - M| / max |M|
inline constexpr double kSvdReconstructRel = 1e-8;    // exact-rank reconstruction
inline constexpr double kSpdResidualRel = 1e-10;      // max |S X - B| / max |B|
inline constexpr double kCholeskyPivotRel = 1e-12;    // pivot floor vs max diagonal
}  // namespace tol

struct SymEigen {
  std::size_t n = 0;
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix eigenvectors;         // n x n, orthonormal columns
};

struct TopRSvd {
  DenseMatrix u;          // m x r, orthonormal columns
  std::vector<double> s;  // length r, non-increasing, >= 0
  DenseMatrix v;          // n x r, orthonormal columns
};

// Full eigendecomposition of a symmetric matrix via Householder
// tridiagonalization followed by implicit QL with shifts.
SymEigen sym_eigen(const DenseMatrix& m);

// Top-r SVD. Uses a small-side Gram eigendecomposition when min(m,n) <= 400,
// otherwise randomized subspace iteration (oversampling 10, 4 power steps)
// with a fixed-seed Gaussian test matrix; deterministic for a fixed seed.
TopRSvd top_r_svd(const DenseMatrix& m, std::size_t r, std::uint64_t seed);

// Largest singular value via power iteration on M^T M from a fixed
// pseudorandom start vector; relative accuracy `tolerance`.
double spectral_norm(const DenseMatrix& m, double tolerance);

// X = S^{-1} B for symmetric positive-definite S (Cholesky). Throws
// NotPositiveDefinite when a pivot falls below kCholeskyPivotRel * max(diag),
// which signals a rank-deficient iterate.
DenseMatrix spd_solve(const DenseMatrix& s, const DenseMatrix& b);

// Orthonormal basis for the column span (thin Householder QR); helper for the
// randomized SVD path, exposed for reuse in tests and diagnostics.
DenseMatrix orthonormal_columns(const DenseMatrix& m);

}  // namespace gsgd
