#pragma once

#include "gsgd/dense_matrix.hpp"

namespace gsgd {

// Current iterate of the factorization X ~ W H^T.
struct FactorPair {
  DenseMatrix w;  // m x r
  DenseMatrix h;  // n x r

  std::size_t rank() const { return w.cols(); }
  std::size_t rows() const { return w.rows(); }
  std::size_t cols() const { return h.rows(); }

  // (W H^T)_ij without forming the product.
  double product_entry(std::size_t i, std::size_t j) const {
    const double* wi = w.data() + i * w.cols();
    const double* hj = h.data() + j * h.cols();
    double s = 0.0;
    for (std::size_t k = 0; k < w.cols(); ++k) s += wi[k] * hj[k];
    return s;
  }

  DenseMatrix product() const { return matmul_a_bt(w, h); }
};

}  // namespace gsgd
