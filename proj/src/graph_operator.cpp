#include "gsgd/graph_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsgd/errors.hpp"

namespace gsgd {

GraphOperator::GraphOperator(const SimilarityGraph& g, double beta, double lambda) {
  if (beta < 0.0) throw BadParameter("GraphOperator: beta must be >= 0");
  if (lambda < 0.0) throw BadParameter("GraphOperator: lambda must be >= 0");
  n_ = g.vertex_count();
  beta_ = beta;
  lambda_ = lambda;
  eig_ = sym_eigen(g.laplacian());
  smoother_.resize(n_);
  higher_.resize(n_);
  higher_sqrt_.resize(n_);
  higher_inv_sqrt_.resize(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const double sigma = std::max(eig_.eigenvalues[k], 0.0);  // Laplacian is PSD
    const double a = 1.0 / (1.0 + lambda * sigma);
    const double l = (1.0 + beta) - beta * a;  // in [1, 1+beta]
    smoother_[k] = a;
    higher_[k] = l;
    higher_sqrt_[k] = std::sqrt(l);
    higher_inv_sqrt_[k] = 1.0 / std::sqrt(l);
  }
}

GraphOperator GraphOperator::identity(std::size_t n) {
  GraphOperator op;
  op.n_ = n;
  op.trivial_ = true;
  return op;
}

const std::vector<double>& GraphOperator::spectrum(OperatorKind kind) const {
  if (trivial_)
    throw BadParameter("GraphOperator: identity operator has no explicit spectrum");
  switch (kind) {
    case OperatorKind::Smoother: return smoother_;
    case OperatorKind::HigherOrder: return higher_;
    case OperatorKind::HigherOrderSqrt: return higher_sqrt_;
    case OperatorKind::HigherOrderInvSqrt: return higher_inv_sqrt_;
  }
  throw BadParameter("GraphOperator: unknown kind");
}

bool GraphOperator::is_identity(OperatorKind kind) const {
  if (trivial_) return true;
  if (kind == OperatorKind::Smoother) return lambda_ == 0.0;
  // L = (1+beta) I - beta A collapses to I when beta = 0 or A = I.
  return beta_ == 0.0 || lambda_ == 0.0;
}

DenseMatrix GraphOperator::apply(OperatorKind kind, const DenseMatrix& m) const {
  if (m.rows() != n_)
    throw DimensionMismatch("GraphOperator::apply: matrix has " +
                            std::to_string(m.rows()) + " rows, operator size " +
                            std::to_string(n_));
  if (is_identity(kind)) return m;
  const std::vector<double>& f = spectrum(kind);
  DenseMatrix t = matmul_at_b(eig_.eigenvectors, m);  // U^T M
  for (std::size_t k = 0; k < n_; ++k) {
    double* row = t.data() + k * t.cols();
    for (std::size_t c = 0; c < t.cols(); ++c) row[c] *= f[k];
  }
  return matmul(eig_.eigenvectors, t);
}

DenseMatrix GraphOperator::dense(OperatorKind kind) const {
  if (is_identity(kind)) return DenseMatrix::identity(n_);
  return apply(kind, DenseMatrix::identity(n_));
}

DenseMatrix higher_order_adjacency(const GraphOperator& op) {
  const std::size_t n = op.size();
  if (op.is_identity(OperatorKind::Smoother)) return DenseMatrix(n, n);
  const DenseMatrix a = op.dense(OperatorKind::Smoother);
  DenseMatrix e(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) e(i, j) = std::abs(a(i, j));  // (I - A)_ij = -A_ij off-diagonal
  return e;
}

}  // namespace gsgd
