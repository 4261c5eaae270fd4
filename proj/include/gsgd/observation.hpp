#pragma once

#include <cstdint>
#include <vector>

#include "gsgd/dense_matrix.hpp"
#include "gsgd/factors.hpp"

namespace gsgd {

struct ObsEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

// Sampled index set Omega with observed values. Entries are kept in canonical
// (row, column) order with a CSR-style row index for fast masked products.
// Immutable after construction.
class ObservationSet {
 public:
  ObservationSet() : row_start_(1, 0) {}
  ObservationSet(std::size_t m, std::size_t n, std::vector<ObsEntry> entries, double p);

  std::size_t row_count() const { return m_; }
  std::size_t col_count() const { return n_; }
  double sampling_probability() const { return p_; }
  double empirical_probability() const;
  const std::vector<ObsEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Offsets into entries() per row: entries of row i live in
  // [row_start(i), row_start(i+1)).
  std::size_t row_start(std::size_t i) const { return row_start_[i]; }

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  double p_ = 1.0;
  std::vector<ObsEntry> entries_;
  std::vector<std::size_t> row_start_;
};

// Independent Bernoulli(p) sampling of every index; observed values carry
// N(0, sigma^2) noise drawn only for included entries. Deterministic per seed.
ObservationSet bernoulli_sample(const DenseMatrix& x, double p, double sigma,
                                std::uint64_t seed);

// Residual values (W H^T)_ij - Y_ij aligned with obs.entries(); off-support
// entries are implicitly zero. Cost O(|Omega| r).
std::vector<double> masked_residual(const ObservationSet& obs, const FactorPair& f);

// (1 / 2p) * sum of squared residuals over Omega.
double loss(const ObservationSet& obs, const FactorPair& f);

// RMSE of W H^T against observed values, over Omega.
double train_rmse(const ObservationSet& obs, const FactorPair& f);

// RMSE of W H^T against the ground truth over the complement of Omega.
double rmse_complement(const DenseMatrix& x_true, const ObservationSet& obs,
                       const FactorPair& f);

// RMSE of W H^T against a held-out entry list (real-data test split).
double rmse_holdout(const std::vector<ObsEntry>& holdout, const FactorPair& f);

// Dense m x n matrix with observed values at their positions, zero elsewhere.
DenseMatrix dense_from_observations(const ObservationSet& obs);

}  // namespace gsgd
