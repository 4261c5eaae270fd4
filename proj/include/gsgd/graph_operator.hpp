#pragma once

#include "gsgd/dense_kernels.hpp"
#include "gsgd/dense_matrix.hpp"
#include "gsgd/graph.hpp"

namespace gsgd {

// Spectral functions of the graph Laplacian exposed by GraphOperator.
//   Smoother        A        = (I + lambda Lt)^{-1}
//   HigherOrder     L        = (1+beta) I - beta A
//   HigherOrderSqrt L^{1/2},  HigherOrderInvSqrt L^{-1/2}
enum class OperatorKind { Smoother, HigherOrder, HigherOrderSqrt, HigherOrderInvSqrt };

// Eigendecomposition-backed bundle of spectral functions of a graph
// Laplacian. One decomposition per graph; every function is a diagonal
// transform in the shared eigenbasis, so square roots are exact and
// applications from many threads are safe (immutable after construction).
class GraphOperator {
 public:
  GraphOperator(const SimilarityGraph& g, double beta, double lambda);

  // Identity operator of the given size (no graph: Lt = 0, so A = L = I).
  static GraphOperator identity(std::size_t n);

  std::size_t size() const { return n_; }
  double beta() const { return beta_; }
  double lambda() const { return lambda_; }
  const SymEigen& eigen() const { return eig_; }
  const std::vector<double>& spectrum(OperatorKind kind) const;

  // True when applying `kind` is the identity map (beta or lambda degenerate).
  bool is_identity(OperatorKind kind) const;

  // Operator-times-matrix product: U f(Sigma) U^T M. Returns M unchanged
  // (bitwise) when the operator is the identity.
  DenseMatrix apply(OperatorKind kind, const DenseMatrix& m) const;

  // Dense realization U f(Sigma) U^T.
  DenseMatrix dense(OperatorKind kind) const;

 private:
  GraphOperator() = default;

  std::size_t n_ = 0;
  double beta_ = 0.0;
  double lambda_ = 0.0;
  bool trivial_ = false;  // constructed without a graph
  SymEigen eig_;
  std::vector<double> smoother_;     // 1 / (1 + lambda sigma)
  std::vector<double> higher_;       // (1+beta) - beta * smoother
  std::vector<double> higher_sqrt_;
  std::vector<double> higher_inv_sqrt_;
};

// Higher-order adjacency E: E_ij = |(I - A)_ij| off the diagonal, zero on it.
DenseMatrix higher_order_adjacency(const GraphOperator& op);

}  // namespace gsgd
