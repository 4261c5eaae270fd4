#include "gsgd/observation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gsgd/errors.hpp"
#include "gsgd/rng.hpp"

namespace gsgd {

ObservationSet::ObservationSet(std::size_t m, std::size_t n,
                               std::vector<ObsEntry> entries, double p)
    : m_(m), n_(n), p_(p), entries_(std::move(entries)) {
  if (!(p > 0.0) || p > 1.0)
    throw BadParameter("ObservationSet: p must lie in (0, 1]");
  for (const ObsEntry& e : entries_) {
    if (e.i >= m_ || e.j >= n_)
      throw BadParameter("ObservationSet: index (" + std::to_string(e.i) + "," +
                         std::to_string(e.j) + ") out of bounds");
    if (!std::isfinite(e.value))
      throw NonFinite("ObservationSet: non-finite observed value");
  }
  std::sort(entries_.begin(), entries_.end(), [](const ObsEntry& a, const ObsEntry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < entries_.size(); ++k)
    if (entries_[k].i == entries_[k - 1].i && entries_[k].j == entries_[k - 1].j)
      throw BadParameter("ObservationSet: duplicate index");
  row_start_.assign(m_ + 1, 0);
  for (const ObsEntry& e : entries_) ++row_start_[e.i + 1];
  for (std::size_t i = 0; i < m_; ++i) row_start_[i + 1] += row_start_[i];
}

double ObservationSet::empirical_probability() const {
  if (m_ == 0 || n_ == 0) return 0.0;
  return static_cast<double>(entries_.size()) / (static_cast<double>(m_) * n_);
}

ObservationSet bernoulli_sample(const DenseMatrix& x, double p, double sigma,
                                std::uint64_t seed) {
  if (!(p > 0.0) || p > 1.0) throw BadParameter("bernoulli_sample: p outside (0, 1]");
  if (sigma < 0.0) throw BadParameter("bernoulli_sample: sigma must be >= 0");
  if (!x.all_finite()) throw NonFinite("bernoulli_sample: input has NaN/Inf");
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ObsEntry> entries;
  entries.reserve(static_cast<std::size_t>(p * static_cast<double>(x.size()) * 1.1) + 16);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (p >= 1.0 || unif(rng) < p) {
        double v = x(i, j);
        if (sigma > 0.0) v += sigma * normal(rng);  // noise only on included entries
        entries.push_back({i, j, v});
      }
    }
  }
  return ObservationSet(x.rows(), x.cols(), std::move(entries), p);
}

std::vector<double> masked_residual(const ObservationSet& obs, const FactorPair& f) {
  if (f.rows() != obs.row_count() || f.cols() != obs.col_count())
    throw DimensionMismatch("masked_residual: factor shapes do not match observations");
  std::vector<double> res(obs.size());
  const auto& entries = obs.entries();
  for (std::size_t k = 0; k < entries.size(); ++k)
    res[k] = f.product_entry(entries[k].i, entries[k].j) - entries[k].value;
  return res;
}

double loss(const ObservationSet& obs, const FactorPair& f) {
  const std::vector<double> res = masked_residual(obs, f);
  double s = 0.0;
  for (double v : res) s += v * v;
  return s / (2.0 * obs.sampling_probability());
}

double train_rmse(const ObservationSet& obs, const FactorPair& f) {
  if (obs.size() == 0) return 0.0;
  const std::vector<double> res = masked_residual(obs, f);
  double s = 0.0;
  for (double v : res) s += v * v;
  return std::sqrt(s / static_cast<double>(res.size()));
}

double rmse_complement(const DenseMatrix& x_true, const ObservationSet& obs,
                       const FactorPair& f) {
  if (x_true.rows() != obs.row_count() || x_true.cols() != obs.col_count())
    throw DimensionMismatch("rmse_complement: truth shape mismatch");
  if (f.rows() != obs.row_count() || f.cols() != obs.col_count())
    throw DimensionMismatch("rmse_complement: factor shape mismatch");
  const std::size_t total = x_true.size();
  if (obs.size() >= total)
    throw EmptyComplement("rmse_complement: every entry is observed");
  double s = 0.0;
  std::size_t count = 0;
  const auto& entries = obs.entries();
  for (std::size_t i = 0; i < x_true.rows(); ++i) {
    std::size_t k = obs.row_start(i);
    const std::size_t kend = obs.row_start(i + 1);
    for (std::size_t j = 0; j < x_true.cols(); ++j) {
      if (k < kend && entries[k].j == j) {
        ++k;  // observed, skip
        continue;
      }
      const double diff = f.product_entry(i, j) - x_true(i, j);
      s += diff * diff;
      ++count;
    }
  }
  return std::sqrt(s / static_cast<double>(count));
}

double rmse_holdout(const std::vector<ObsEntry>& holdout, const FactorPair& f) {
  if (holdout.empty()) throw EmptyComplement("rmse_holdout: empty holdout list");
  double s = 0.0;
  for (const ObsEntry& e : holdout) {
    const double diff = f.product_entry(e.i, e.j) - e.value;
    s += diff * diff;
  }
  return std::sqrt(s / static_cast<double>(holdout.size()));
}

DenseMatrix dense_from_observations(const ObservationSet& obs) {
  DenseMatrix x(obs.row_count(), obs.col_count());
  for (const ObsEntry& e : obs.entries()) x(e.i, e.j) = e.value;
  return x;
}

}  // namespace gsgd
