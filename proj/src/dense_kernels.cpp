#include "gsgd/dense_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gsgd/errors.hpp"
#include "gsgd/rng.hpp"

namespace gsgd {

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form with
// accumulation of the orthogonal transform (EISPACK tred2 lineage).
// On entry q holds the symmetric input; on exit q holds the accumulated
// orthogonal matrix, d the diagonal and e the subdiagonal (e[0] unused).
void householder_tridiagonalize(DenseMatrix& q, std::vector<double>& d,
                                std::vector<double>& e) {
  const int n = static_cast<int>(q.rows());
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::abs(q(i, k));
      if (scale == 0.0) {
        e[i] = q(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          q(i, k) /= scale;
          h += q(i, k) * q(i, k);
        }
        double f = q(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        q(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          q(j, i) = q(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += q(j, k) * q(i, k);
          for (int k = j + 1; k <= l; ++k) g += q(k, j) * q(i, k);
          e[j] = g / h;
          f += e[j] * q(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = q(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) q(j, k) -= f * e[k] + g * q(i, k);
        }
      }
    } else {
      e[i] = q(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      for (int j = 0; j < i; ++j) {
        double g = 0.0;
        for (int k = 0; k < i; ++k) g += q(i, k) * q(k, j);
        for (int k = 0; k < i; ++k) q(k, j) -= g * q(k, i);
      }
    }
    d[i] = q(i, i);
    q(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      q(j, i) = 0.0;
      q(i, j) = 0.0;
    }
  }
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix,
// rotating the columns of q along the way (EISPACK tql2 lineage).
void ql_implicit_shift(std::vector<double>& d, std::vector<double>& e, DenseMatrix& q) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw NumericalError("sym_eigen: QL iteration failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = q(k, i + 1);
            q(k, i + 1) = s * q(k, i) + c * f;
            q(k, i) = c * q(k, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s > 0.0)
    for (double& x : v) x /= s;
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix g(rows, cols);
  for (std::size_t k = 0; k < g.size(); ++k) g.data()[k] = normal(rng);
  return g;
}

// Deterministic completion: writes into column `col` of u a unit vector
// orthogonal to columns 0..col-1, built from standard basis vectors.
void fill_orthonormal_column(DenseMatrix& u, std::size_t col) {
  const std::size_t m = u.rows();
  for (std::size_t attempt = 0; attempt < m; ++attempt) {
    std::vector<double> cand(m, 0.0);
    cand[attempt] = 1.0;
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (std::size_t c = 0; c < col; ++c) {
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += cand[i] * u(i, c);
        for (std::size_t i = 0; i < m; ++i) cand[i] -= proj * u(i, c);
      }
    }
    double nrm = 0.0;
    for (double x : cand) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm > 0.5) {
      for (std::size_t i = 0; i < m; ++i) u(i, col) = cand[i] / nrm;
      return;
    }
  }
  throw NumericalError("top_r_svd: orthonormal completion failed");
}

// SVD through the small-side Gram matrix. Singular values are re-evaluated as
// ||M v|| rather than sqrt of Gram eigenvalues, which keeps trailing values of
// exactly low-rank inputs at roundoff level instead of sqrt(eps) level.
TopRSvd gram_svd(const DenseMatrix& m, std::size_t r) {
  if (m.rows() < m.cols()) {
    TopRSvd t = gram_svd(transpose(m), r);
    std::swap(t.u, t.v);
    return t;
  }
  const std::size_t ncols = m.cols();
  const SymEigen eig = sym_eigen(matmul_at_b(m, m));
  TopRSvd out;
  out.u = DenseMatrix(m.rows(), r);
  out.v = DenseMatrix(ncols, r);
  out.s.assign(r, 0.0);
  double sigma_floor = 0.0;
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t src = ncols - 1 - k;  // eigenvalues ascending
    std::vector<double> vk(ncols);
    for (std::size_t i = 0; i < ncols; ++i) vk[i] = eig.eigenvectors(i, src);
    // Canonical sign: largest-magnitude entry positive (first on ties).
    std::size_t piv = 0;
    for (std::size_t i = 1; i < ncols; ++i)
      if (std::abs(vk[i]) > std::abs(vk[piv])) piv = i;
    if (vk[piv] < 0.0)
      for (double& x : vk) x = -x;
    std::vector<double> wk(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < ncols; ++j) acc += m(i, j) * vk[j];
      wk[i] = acc;
    }
    double sigma = 0.0;
    for (double x : wk) sigma += x * x;
    sigma = std::sqrt(sigma);
    out.s[k] = sigma;
    for (std::size_t i = 0; i < ncols; ++i) out.v(i, k) = vk[i];
    if (k == 0) sigma_floor = sigma * 1e-13;
    if (sigma > sigma_floor && sigma > 0.0) {
      for (std::size_t i = 0; i < m.rows(); ++i) out.u(i, k) = wk[i] / sigma;
      // One re-orthogonalization pass against earlier columns.
      for (std::size_t c = 0; c < k; ++c) {
        double proj = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) proj += out.u(i, k) * out.u(i, c);
        for (std::size_t i = 0; i < m.rows(); ++i) out.u(i, k) -= proj * out.u(i, c);
      }
      double nrm = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) nrm += out.u(i, k) * out.u(i, k);
      nrm = std::sqrt(nrm);
      if (nrm > 0.0)
        for (std::size_t i = 0; i < m.rows(); ++i) out.u(i, k) /= nrm;
      else
        fill_orthonormal_column(out.u, k);
    } else {
      fill_orthonormal_column(out.u, k);
    }
  }
  // Guard against roundoff inversions in nearly equal singular values.
  for (std::size_t k = 1; k < r; ++k) out.s[k] = std::min(out.s[k], out.s[k - 1]);
  return out;
}

}  // namespace

SymEigen sym_eigen(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("sym_eigen: matrix not square");
  if (!m.all_finite()) throw NonFinite("sym_eigen: input has NaN/Inf");
  const std::size_t n = m.rows();
  const double scale = max_abs(m);
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
  if (asym > tol::kSymmetryRel * scale)
    throw NotSymmetric("sym_eigen: asymmetry " + std::to_string(asym) +
                       " exceeds tolerance");

  SymEigen out;
  out.n = n;
  out.eigenvectors = DenseMatrix(n, n);
  if (n == 0) return out;
  DenseMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = 0.5 * (m(i, j) + m(j, i));
  std::vector<double> d;
  std::vector<double> e;
  householder_tridiagonalize(q, d, e);
  ql_implicit_shift(d, e, q);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = d[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = q(i, order[k]);
  }
  return out;
}

DenseMatrix orthonormal_columns(const DenseMatrix& m_in) {
  const std::size_t m = m_in.rows();
  const std::size_t k = m_in.cols();
  if (k > m) throw DimensionMismatch("orthonormal_columns: more columns than rows");
  DenseMatrix a = m_in;
  std::vector<double> tau(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double nrm = 0.0;
    for (std::size_t i = j; i < m; ++i) nrm += a(i, j) * a(i, j);
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) continue;
    const double alpha = a(j, j);
    const double beta = (alpha >= 0.0) ? -nrm : nrm;
    tau[j] = (beta - alpha) / beta;
    const double scale_inv = 1.0 / (alpha - beta);
    for (std::size_t i = j + 1; i < m; ++i) a(i, j) *= scale_inv;
    a(j, j) = beta;
    for (std::size_t c = j + 1; c < k; ++c) {
      double w = a(j, c);
      for (std::size_t i = j + 1; i < m; ++i) w += a(i, j) * a(i, c);
      w *= tau[j];
      a(j, c) -= w;
      for (std::size_t i = j + 1; i < m; ++i) a(i, c) -= w * a(i, j);
    }
  }
  DenseMatrix q(m, k);
  for (std::size_t c = 0; c < k; ++c) q(c, c) = 1.0;
  for (std::size_t jj = k; jj-- > 0;) {
    if (tau[jj] == 0.0) continue;
    for (std::size_t c = jj; c < k; ++c) {
      double w = q(jj, c);
      for (std::size_t i = jj + 1; i < m; ++i) w += a(i, jj) * q(i, c);
      w *= tau[jj];
      q(jj, c) -= w;
      for (std::size_t i = jj + 1; i < m; ++i) q(i, c) -= w * a(i, jj);
    }
  }
  return q;
}

TopRSvd top_r_svd(const DenseMatrix& m, std::size_t r, std::uint64_t seed) {
  const std::size_t small = std::min(m.rows(), m.cols());
  if (r < 1 || r > small)
    throw RankOutOfRange("top_r_svd: rank " + std::to_string(r) +
                         " outside [1, " + std::to_string(small) + "]");
  if (!m.all_finite()) throw NonFinite("top_r_svd: input has NaN/Inf");
  if (small <= 400) return gram_svd(m, r);

  const std::size_t l = std::min(r + 10, small);
  auto rng = make_rng(seed);
  DenseMatrix omega = gaussian_matrix(m.cols(), l, rng);
  DenseMatrix y = matmul(m, omega);
  for (int it = 0; it < 4; ++it) {
    y = orthonormal_columns(y);
    DenseMatrix z = matmul_at_b(m, y);
    z = orthonormal_columns(z);
    y = matmul(m, z);
  }
  const DenseMatrix qbasis = orthonormal_columns(y);
  const DenseMatrix b = matmul_at_b(qbasis, m);  // l x n
  TopRSvd small_svd = gram_svd(b, r);
  TopRSvd out;
  out.u = matmul(qbasis, small_svd.u);
  out.s = std::move(small_svd.s);
  out.v = std::move(small_svd.v);
  return out;
}

double spectral_norm(const DenseMatrix& m, double tolerance) {
  if (tolerance <= 0.0) throw BadParameter("spectral_norm: tol must be positive");
  if (!m.all_finite()) throw NonFinite("spectral_norm: input has NaN/Inf");
  if (m.size() == 0 || max_abs(m) == 0.0) return 0.0;

  auto rng = make_rng(0x5EEDull);  // fixed start vector, deterministic
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t nr = m.rows();
  const std::size_t nc = m.cols();
  std::vector<double> v(nc);
  for (double& x : v) x = normal(rng);
  normalize(v);

  std::vector<double> w(nr);
  double sigma = 0.0;
  double prev = -1.0;
  int stable = 0;
  int redraws = 0;
  const long max_iters = 100000;
  for (long it = 0; it < max_iters; ++it) {
    for (std::size_t i = 0; i < nr; ++i) {
      const double* mi = m.data() + i * nc;
      double acc = 0.0;
      for (std::size_t j = 0; j < nc; ++j) acc += mi[j] * v[j];
      w[i] = acc;
    }
    double wn = 0.0;
    for (double x : w) wn += x * x;
    wn = std::sqrt(wn);
    if (wn == 0.0) {
      if (++redraws > 5) return 0.0;  // start vector stuck in the null space
      for (double& x : v) x = normal(rng);
      normalize(v);
      prev = -1.0;
      stable = 0;
      continue;
    }
    sigma = wn;  // Rayleigh estimate sqrt(v^T M^T M v) for unit v
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t i = 0; i < nr; ++i) {
      const double* mi = m.data() + i * nc;
      const double wi = w[i];
      for (std::size_t j = 0; j < nc; ++j) v[j] += mi[j] * wi;
    }
    normalize(v);
    if (prev >= 0.0 && std::abs(sigma - prev) <= 0.01 * tolerance * sigma) {
      if (++stable >= 2) return sigma;
    } else {
      stable = 0;
    }
    prev = sigma;
  }
  return sigma;
}

DenseMatrix spd_solve(const DenseMatrix& s, const DenseMatrix& b) {
  if (s.rows() != s.cols()) throw DimensionMismatch("spd_solve: S not square");
  if (s.rows() != b.rows()) throw DimensionMismatch("spd_solve: S and B row counts differ");
  if (!s.all_finite() || !b.all_finite()) throw NonFinite("spd_solve: NaN/Inf input");
  const std::size_t n = s.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, s(i, i));
  if (n > 0 && max_diag <= 0.0)
    throw NotPositiveDefinite("spd_solve: non-positive diagonal");

  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= tol::kCholeskyPivotRel * max_diag)
      throw NotPositiveDefinite("spd_solve: Cholesky pivot " + std::to_string(d) +
                                " at index " + std::to_string(j));
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }

  DenseMatrix x = b;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {  // L y = b
      double v = x(i, c);
      for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x(k, c);
      x(i, c) = v / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {  // L^T x = y
      double v = x(ii, c);
      for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * x(k, c);
      x(ii, c) = v / l(ii, ii);
    }
  }
  return x;
}

}  // namespace gsgd
