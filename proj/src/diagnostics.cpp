#include "gsgd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsgd/dense_kernels.hpp"
#include "gsgd/errors.hpp"
#include "gsgd/init_projection.hpp"

namespace gsgd {

namespace {

constexpr double kSpectralTol = 1e-8;
constexpr double kAlignGradTol = 1e-10;
constexpr int kAlignMaxIters = 500;

// Gauss-Jordan inverse with partial pivoting; r is small (rank-sized).
DenseMatrix invert_small(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  DenseMatrix work = a;
  DenseMatrix inv = DenseMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(work(i, col)) > std::abs(work(piv, col))) piv = i;
    if (std::abs(work(piv, col)) < 1e-300)
      throw NumericalError("invert_small: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(piv, j), work(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const double d = work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = work(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(i, j) -= f * work(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

DenseMatrix scale_columns(DenseMatrix m, const std::vector<double>& d) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < m.cols(); ++c) m(i, c) *= d[c];
  return m;
}

DenseMatrix left_right_smooth(const DenseMatrix& x, const GraphOperator& op_w,
                              const GraphOperator& op_h) {
  DenseMatrix axb = op_w.apply(OperatorKind::Smoother, x);
  if (!op_h.is_identity(OperatorKind::Smoother))
    axb = transpose(op_h.apply(OperatorKind::Smoother, transpose(axb)));
  return axb;
}

struct AlignWork {
  DenseMatrix cw;       // L_W^{1/2} W
  DenseMatrix cw_star;  // L_W^{1/2} W*
  DenseMatrix ch;       // L_H^{1/2} H
  DenseMatrix ch_star;  // L_H^{1/2} H*
  std::vector<double> sigma;       // Sigma*
  std::vector<double> sigma_half;  // Sigma*^{1/2}
};

double alignment_objective(const AlignWork& wk, const DenseMatrix& q,
                           const DenseMatrix& p) {
  const DenseMatrix rw = scale_columns(matmul(wk.cw, q) - wk.cw_star, wk.sigma_half);
  const DenseMatrix rh = scale_columns(matmul(wk.ch, p) - wk.ch_star, wk.sigma_half);
  const double a = frobenius_norm(rw);
  const double b = frobenius_norm(rh);
  return a * a + b * b;
}

DenseMatrix alignment_gradient(const AlignWork& wk, const DenseMatrix& q,
                               const DenseMatrix& p) {
  // 2 W^T L_W (W Q - W*) S  -  2 P [S (H P - H*)^T L_H H] P
  DenseMatrix g1 = scale_columns(matmul_at_b(wk.cw, matmul(wk.cw, q) - wk.cw_star),
                                 wk.sigma);
  DenseMatrix inner = matmul_at_b(matmul(wk.ch, p) - wk.ch_star, wk.ch);  // (HP-H*)^T H
  for (std::size_t i = 0; i < inner.rows(); ++i)
    for (std::size_t c = 0; c < inner.cols(); ++c) inner(i, c) *= wk.sigma[i];
  const DenseMatrix g2 = matmul(p, matmul(inner, p));
  DenseMatrix g = g1;
  g -= g2;
  g *= 2.0;
  return g;
}

double alignment_foc(const AlignWork& wk, const DenseMatrix& q, const DenseMatrix& p) {
  DenseMatrix lhs =
      scale_columns(matmul_at_b(q, matmul_at_b(wk.cw, matmul(wk.cw, q) - wk.cw_star)),
                    wk.sigma);
  DenseMatrix rhs = matmul(matmul_at_b(matmul(wk.ch, p) - wk.ch_star, wk.ch), p);
  for (std::size_t i = 0; i < rhs.rows(); ++i)
    for (std::size_t c = 0; c < rhs.cols(); ++c) rhs(i, c) *= wk.sigma[i];
  return frobenius_norm(lhs - rhs);
}

}  // namespace

PsiSmoothness psi_smoothness(const DenseMatrix& x, const GraphOperator& op_w,
                             const GraphOperator& op_h, std::size_t r) {
  if (max_abs(x) == 0.0) throw ZeroMatrix("psi_smoothness: zero matrix");
  if (op_w.size() != x.rows() || op_h.size() != x.cols())
    throw DimensionMismatch("psi_smoothness: operator sizes do not match X");
  if (r < 1) throw RankOutOfRange("psi_smoothness: r must be >= 1");
  PsiSmoothness out;
  const DenseMatrix axb = left_right_smooth(x, op_w, op_h);
  out.ratio = spectral_norm(axb - x, kSpectralTol) / spectral_norm(x, kSpectralTol);
  const double small = static_cast<double>(std::min(x.rows(), x.cols()));
  out.psi = out.ratio * out.ratio * small / static_cast<double>(r);
  return out;
}

double graph_incoherence_mu(const DenseMatrix& x, std::size_t r,
                            const GraphOperator& op_w, const GraphOperator& op_h) {
  const TopRSvd svd = top_r_svd(x, r, 0);
  if (svd.s.front() <= 0.0 || svd.s.back() <= 1e-12 * svd.s.front())
    throw RankOutOfRange("graph_incoherence_mu: numerical rank of X below r");
  return measured_graph_incoherence(svd.u, svd.v, op_w, op_h);
}

AlignmentResult aligned_distance(const FactorPair& f, const FactorPair& f_star,
                                 const GraphOperator& op_w, const GraphOperator& op_h,
                                 const std::vector<double>& sigma_star) {
  const std::size_t r = f.rank();
  if (f_star.rank() != r || sigma_star.size() != r)
    throw DimensionMismatch("aligned_distance: rank mismatch");
  if (f.rows() != f_star.rows() || f.cols() != f_star.cols())
    throw DimensionMismatch("aligned_distance: factor shapes differ");
  for (double s : sigma_star)
    if (!(s > 0.0)) throw BadParameter("aligned_distance: Sigma* must be positive");

  AlignWork wk;
  wk.cw = op_w.apply(OperatorKind::HigherOrderSqrt, f.w);
  wk.cw_star = op_w.apply(OperatorKind::HigherOrderSqrt, f_star.w);
  wk.ch = op_h.apply(OperatorKind::HigherOrderSqrt, f.h);
  wk.ch_star = op_h.apply(OperatorKind::HigherOrderSqrt, f_star.h);
  wk.sigma = sigma_star;
  wk.sigma_half.resize(r);
  for (std::size_t k = 0; k < r; ++k) wk.sigma_half[k] = std::sqrt(sigma_star[k]);

  const std::size_t m = f.rows();
  const std::size_t n = f.cols();
  const std::size_t nparam = r * r;

  DenseMatrix q = DenseMatrix::identity(r);
  DenseMatrix p = q;  // Q^{-T}
  double fval = alignment_objective(wk, q, p);
  double lm = 1e-4;
  bool converged = false;

  for (int iter = 0; iter < kAlignMaxIters; ++iter) {
    const DenseMatrix grad = alignment_gradient(wk, q, p);
    if (frobenius_norm(grad) <= kAlignGradTol) {
      converged = true;
      break;
    }

    // Gauss-Newton Jacobian, one column per Q entry (a, b).
    // First residual block (W Q - W*) is linear in Q; the second depends on
    // Q through P = Q^{-T} with dP = -P dQ^T P.
    const DenseMatrix hp = matmul(wk.ch, p);                 // n x r
    const DenseMatrix ps = scale_columns(p, wk.sigma_half);  // P * S^{1/2}
    const std::size_t nres = (m + n) * r;
    DenseMatrix jac(nres, nparam);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) {
        const std::size_t col = a * r + b;
        // d rho1 = cw[:,a] placed in residual column b, scaled by s_b.
        for (std::size_t i = 0; i < m; ++i)
          jac(i * r + b, col) = wk.cw(i, a) * wk.sigma_half[b];
        // d rho2(i, c) = -hp(i, b) * ps(a, c)
        for (std::size_t i = 0; i < n; ++i) {
          const double hib = hp(i, b);
          if (hib == 0.0) continue;
          for (std::size_t c = 0; c < r; ++c)
            jac((m + i) * r + c, col) -= hib * ps(a, c);
        }
      }
    }
    std::vector<double> rho(nres);
    {
      const DenseMatrix rw =
          scale_columns(matmul(wk.cw, q) - wk.cw_star, wk.sigma_half);
      const DenseMatrix rh = scale_columns(hp - wk.ch_star, wk.sigma_half);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < r; ++c) rho[i * r + c] = rw(i, c);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < r; ++c) rho[(m + i) * r + c] = rh(i, c);
    }
    DenseMatrix jtj = matmul_at_b(jac, jac);
    std::vector<double> jtr(nparam, 0.0);
    for (std::size_t i = 0; i < nres; ++i)
      for (std::size_t cpar = 0; cpar < nparam; ++cpar)
        jtr[cpar] += jac(i, cpar) * rho[i];

    bool stepped = false;
    while (lm < 1e14) {
      DenseMatrix damped = jtj;
      for (std::size_t k = 0; k < nparam; ++k) damped(k, k) += lm;
      DenseMatrix neg_jtr(nparam, 1);
      for (std::size_t k = 0; k < nparam; ++k) neg_jtr(k, 0) = -jtr[k];
      DenseMatrix delta;
      try {
        delta = spd_solve(damped, neg_jtr);
      } catch (const NotPositiveDefinite&) {
        lm *= 10.0;
        continue;
      }
      DenseMatrix q_new = q;
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) q_new(a, b) += delta(a * r + b, 0);
      DenseMatrix p_new;
      try {
        p_new = transpose(invert_small(q_new));
      } catch (const NumericalError&) {
        lm *= 10.0;
        continue;
      }
      const double f_new = alignment_objective(wk, q_new, p_new);
      if (f_new < fval) {
        q = std::move(q_new);
        p = std::move(p_new);
        fval = f_new;
        lm = std::max(lm / 3.0, 1e-12);
        stepped = true;
        break;
      }
      lm *= 10.0;
    }
    if (!stepped) break;  // damping saturated: report best found
  }

  AlignmentResult out;
  out.q = q;
  out.dist = std::sqrt(std::max(fval, 0.0));
  out.foc_residual = alignment_foc(wk, q, p);
  out.converged = converged;
  return out;
}

RegularizerValues regularizer_values(const FactorPair& f, const ObservationSet& obs,
                                     const GraphOperator& op_w,
                                     const GraphOperator& op_h,
                                     const DenseMatrix& lap_w, const DenseMatrix& lap_h,
                                     double beta) {
  if (lap_w.rows() != f.rows() || lap_h.rows() != f.cols())
    throw DimensionMismatch("regularizer_values: Laplacian sizes do not match factors");
  RegularizerValues out;
  out.laplacian_reg = frobenius_dot(f.w, matmul(lap_w, f.w)) +
                      frobenius_dot(f.h, matmul(lap_h, f.h));

  const std::vector<double> res = masked_residual(obs, f);
  DenseMatrix rd(obs.row_count(), obs.col_count());
  const auto& entries = obs.entries();
  for (std::size_t k = 0; k < entries.size(); ++k)
    rd(entries[k].i, entries[k].j) = res[k];
  double rn = frobenius_norm(rd);
  double row_side = rn * rn - frobenius_dot(rd, op_w.apply(OperatorKind::Smoother, rd));
  const DenseMatrix rdt = transpose(rd);
  double col_side =
      rn * rn - frobenius_dot(rdt, op_h.apply(OperatorKind::Smoother, rdt));
  out.higher_order_reg =
      beta / (2.0 * obs.sampling_probability()) * (row_side + col_side);
  return out;
}

}  // namespace gsgd
