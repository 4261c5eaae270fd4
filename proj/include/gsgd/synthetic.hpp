#pragma once

#include <cstdint>

#include "gsgd/dense_matrix.hpp"
#include "gsgd/graph.hpp"

namespace gsgd {

enum class GraphKind { KnnUniformPoints, Community };

struct GraphParams {
  std::size_t k = 10;              // knn_uniform_points
  std::size_t communities = 2;     // community model
  double intra_p = 0.5;
  double inter_p = 0.01;
};

struct SynthConfig {
  std::size_t m = 200;
  std::size_t n = 200;
  std::size_t r = 5;
  GraphKind graph_kind = GraphKind::KnnUniformPoints;
  GraphParams graph_params;
  double filter_scale = 1.0;     // Tikhonov low-pass g(s) = 1 / (1 + scale * s)
  bool identity_filter = false;  // bypass: g == 1, truth is plain Gaussian rank-r
  std::uint64_t seed = 0;
};

// Random connected graph of the requested kind; retries with fresh sub-seeds
// up to 20 times before giving up. Deterministic per seed.
SimilarityGraph generate_graph(GraphKind kind, const GraphParams& params, std::size_t n,
                               std::uint64_t seed);

// Rank-r ground truth smooth on both graphs: Gaussian factors filtered
// through the Tikhonov spectral low-pass of each Laplacian, rescaled so that
// ||X||_F / sqrt(m n) = 1.
DenseMatrix generate_smooth_truth(const SynthConfig& cfg, const SimilarityGraph& g1,
                                  const SimilarityGraph& g2);

// One full synthetic problem: both graphs plus the smooth truth.
struct SyntheticInstance {
  SimilarityGraph g1;
  SimilarityGraph g2;
  DenseMatrix x_star;
};

SyntheticInstance generate_instance(const SynthConfig& cfg);

}  // namespace gsgd
