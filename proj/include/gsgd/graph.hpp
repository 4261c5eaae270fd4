#pragma once

#include <cstdint>
#include <vector>

#include "gsgd/dense_matrix.hpp"

namespace gsgd {

struct Edge {
  std::size_t i = 0;  // i < j
  std::size_t j = 0;
  double weight = 1.0;
};

// Weighted undirected similarity graph with its combinatorial Laplacian
// (degree minus adjacency). No self-loops, no duplicate edges.
class SimilarityGraph {
 public:
  SimilarityGraph() = default;
  SimilarityGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const DenseMatrix& laplacian() const { return laplacian_; }
  DenseMatrix adjacency() const;

  bool connected() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;  // canonical order: sorted by (i, j)
  DenseMatrix laplacian_;
};

// Union-symmetrized k-nearest-neighbour graph on Euclidean features, binary
// weights; ties broken toward the lower index.
SimilarityGraph knn_graph(const DenseMatrix& features, std::size_t k);

// Removes floor(proportion * |E|) edges chosen uniformly and adds the same
// number of uniformly chosen pairs absent from the input graph (weight 1).
// Deterministic for a fixed seed; preserves the edge count.
SimilarityGraph perturb_edges(const SimilarityGraph& g, double proportion,
                              std::uint64_t seed);

}  // namespace gsgd
