#pragma once

#include <vector>

#include "gsgd/factors.hpp"
#include "gsgd/graph_operator.hpp"
#include "gsgd/observation.hpp"

namespace gsgd {

struct PsiSmoothness {
  double ratio = 0.0;  // ||A X B - X||_op / ||X||_op
  double psi = 0.0;    // ratio^2 * min(m, n) / r
};

// Graph quality measure: how little the smoothing operators move X. Small
// ratio means the graphs describe X well.
PsiSmoothness psi_smoothness(const DenseMatrix& x, const GraphOperator& op_w,
                             const GraphOperator& op_h, std::size_t r);

// Smallest mu for which the weighted row-norm bounds
// ||L_W^{1/2} U*||_{2,inf} <= sqrt(mu r / m) (and the V* twin) hold with
// equality at the max; U*, V* from the top-r SVD of X.
double graph_incoherence_mu(const DenseMatrix& x, std::size_t r,
                            const GraphOperator& op_w, const GraphOperator& op_h);

struct AlignmentResult {
  DenseMatrix q;              // r x r, invertible
  double dist = 0.0;          // value of the graph-aware metric at q
  double foc_residual = 0.0;  // first-order-condition residual at q
  bool converged = true;      // false: best found is reported, may not be optimal
};

// Graph-aware distance between factorizations: minimizes
//   ||L_W^{1/2}(W Q - W*) S*^{1/2}||_F^2 + ||L_H^{1/2}(H Q^{-T} - H*) S*^{1/2}||_F^2
// over invertible Q by damped Gauss-Newton from Q = I. The returned
// foc_residual certifies stationarity:
//   ||Q^T W^T L_W (W Q - W*) S* - S* (H Q^{-T} - H*)^T L_H H Q^{-T}||_F.
AlignmentResult aligned_distance(const FactorPair& f, const FactorPair& f_star,
                                 const GraphOperator& op_w, const GraphOperator& op_h,
                                 const std::vector<double>& sigma_star);

struct RegularizerValues {
  // tr(W^T Lt_W W) + tr(H^T Lt_H H): the Laplacian regularizer, unweighted.
  double laplacian_reg = 0.0;
  // (beta / 2p) [tr(R^T (I-A) R) + tr(R (I-B) R^T)] for the masked residual R:
  // the graph smoothness regularization as it enters the per-factor objectives.
  double higher_order_reg = 0.0;
};

RegularizerValues regularizer_values(const FactorPair& f, const ObservationSet& obs,
                                     const GraphOperator& op_w,
                                     const GraphOperator& op_h,
                                     const DenseMatrix& lap_w, const DenseMatrix& lap_h,
                                     double beta);

}  // namespace gsgd
