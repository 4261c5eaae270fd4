#include "gsgd/init_projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsgd/errors.hpp"

namespace gsgd {

namespace {

FactorPair factors_from_svd(const TopRSvd& svd) {
  const std::size_t r = svd.s.size();
  FactorPair f;
  f.w = svd.u;
  f.h = svd.v;
  for (std::size_t k = 0; k < r; ++k) {
    const double root = std::sqrt(std::max(svd.s[k], 0.0));
    for (std::size_t i = 0; i < f.w.rows(); ++i) f.w(i, k) *= root;
    for (std::size_t i = 0; i < f.h.rows(); ++i) f.h(i, k) *= root;
  }
  return f;
}

}  // namespace

FactorPair standard_spectral_init(const ObservationSet& obs, std::size_t r,
                                  std::uint64_t seed, TopRSvd& svd_out) {
  DenseMatrix y = dense_from_observations(obs);
  y *= 1.0 / obs.sampling_probability();
  svd_out = top_r_svd(y, r, seed);
  return factors_from_svd(svd_out);
}

FactorPair standard_spectral_init(const ObservationSet& obs, std::size_t r,
                                  std::uint64_t seed) {
  TopRSvd svd;
  return standard_spectral_init(obs, r, seed, svd);
}

FactorPair graph_spectral_init(const ObservationSet& obs, const GraphOperator& op_w,
                               const GraphOperator& op_h, std::size_t r,
                               std::uint64_t seed, TopRSvd& svd_out) {
  if (op_w.size() != obs.row_count() || op_h.size() != obs.col_count())
    throw DimensionMismatch("graph_spectral_init: operator sizes do not match data");
  DenseMatrix y = dense_from_observations(obs);
  y *= 1.0 / obs.sampling_probability();
  y = op_w.apply(OperatorKind::Smoother, y);
  if (!op_h.is_identity(OperatorKind::Smoother)) {
    // Right-multiplication by the symmetric B: (B Y^T)^T.
    y = transpose(op_h.apply(OperatorKind::Smoother, transpose(y)));
  }
  svd_out = top_r_svd(y, r, seed);
  return factors_from_svd(svd_out);
}

FactorPair graph_spectral_init(const ObservationSet& obs, const GraphOperator& op_w,
                               const GraphOperator& op_h, std::size_t r,
                               std::uint64_t seed) {
  TopRSvd svd;
  return graph_spectral_init(obs, op_w, op_h, r, seed, svd);
}

FactorPair project_b(const FactorPair& f_tilde, const GraphOperator& op_w,
                     const GraphOperator& op_h, double b) {
  if (!(b > 0.0)) throw BadRadius("project_b: radius must be positive");
  if (op_w.size() != f_tilde.rows() || op_h.size() != f_tilde.cols())
    throw DimensionMismatch("project_b: operator sizes do not match factors");
  const std::size_t m = f_tilde.rows();
  const std::size_t n = f_tilde.cols();
  const std::size_t r = f_tilde.rank();

  const DenseMatrix cw = op_w.apply(OperatorKind::HigherOrderSqrt, f_tilde.w);
  const DenseMatrix ch = op_h.apply(OperatorKind::HigherOrderSqrt, f_tilde.h);

  // ||cw_i ch^T||_2^2 = cw_i (ch^T ch) cw_i^T; one r x r Gram per side.
  const DenseMatrix gram_h = matmul_at_b(ch, ch);
  const DenseMatrix gram_w = matmul_at_b(cw, cw);

  auto row_norm_through = [r](const DenseMatrix& rows, std::size_t i,
                              const DenseMatrix& gram) {
    const double* x = rows.data() + i * r;
    double s = 0.0;
    for (std::size_t a = 0; a < r; ++a) {
      double t = 0.0;
      for (std::size_t c = 0; c < r; ++c) t += gram(a, c) * x[c];
      s += x[a] * t;
    }
    return std::sqrt(std::max(s, 0.0));
  };

  // Both scaling families use the original (pre-projection) weighted factors.
  DenseMatrix pw = cw;
  for (std::size_t i = 0; i < m; ++i) {
    const double denom = std::sqrt(static_cast<double>(m)) * row_norm_through(cw, i, gram_h);
    const double scale = denom > 0.0 ? std::min(1.0, b / denom) : 1.0;
    if (scale < 1.0)
      for (std::size_t k = 0; k < r; ++k) pw(i, k) *= scale;
  }
  DenseMatrix ph = ch;
  for (std::size_t j = 0; j < n; ++j) {
    const double denom = std::sqrt(static_cast<double>(n)) * row_norm_through(ch, j, gram_w);
    const double scale = denom > 0.0 ? std::min(1.0, b / denom) : 1.0;
    if (scale < 1.0)
      for (std::size_t k = 0; k < r; ++k) ph(j, k) *= scale;
  }

  FactorPair out;
  out.w = op_w.apply(OperatorKind::HigherOrderInvSqrt, pw);
  out.h = op_h.apply(OperatorKind::HigherOrderInvSqrt, ph);
  return out;
}

double incoherent_radius(double sigma1_est, double mu_est, std::size_t r, double beta,
                         double c_b) {
  if (!(sigma1_est > 0.0) || !(mu_est > 0.0) || r < 1 || beta < 0.0 || !(c_b > 0.0))
    throw BadParameter("incoherent_radius: all inputs must be positive");
  return c_b * std::sqrt(mu_est * static_cast<double>(r) * (1.0 + beta)) * sigma1_est;
}

double measured_graph_incoherence(const DenseMatrix& u, const DenseMatrix& v,
                                  const GraphOperator& op_w, const GraphOperator& op_h) {
  if (u.cols() != v.cols())
    throw DimensionMismatch("measured_graph_incoherence: rank mismatch");
  const double r = static_cast<double>(u.cols());
  const DenseMatrix lu = op_w.apply(OperatorKind::HigherOrderSqrt, u);
  const DenseMatrix lv = op_h.apply(OperatorKind::HigherOrderSqrt, v);
  auto max_row_sq = [](const DenseMatrix& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.cols(); ++k) s += m(i, k) * m(i, k);
      best = std::max(best, s);
    }
    return best;
  };
  const double mu_w = static_cast<double>(u.rows()) / r * max_row_sq(lu);
  const double mu_h = static_cast<double>(v.rows()) / r * max_row_sq(lv);
  return std::max(mu_w, mu_h);
}

}  // namespace gsgd
