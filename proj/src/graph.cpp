#include "gsgd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "gsgd/errors.hpp"
#include "gsgd/rng.hpp"

namespace gsgd {

SimilarityGraph::SimilarityGraph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  for (Edge& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i == e.j)
      throw BadParameter("SimilarityGraph: self-loop at vertex " + std::to_string(e.i));
    if (e.j >= n_) throw BadParameter("SimilarityGraph: vertex id out of range");
    if (!(e.weight > 0.0)) throw BadParameter("SimilarityGraph: non-positive weight");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j)
      throw BadParameter("SimilarityGraph: duplicate edge (" +
                         std::to_string(edges_[k].i) + "," +
                         std::to_string(edges_[k].j) + ")");
  }
  laplacian_ = DenseMatrix(n_, n_);
  for (const Edge& e : edges_) {
    laplacian_(e.i, e.i) += e.weight;
    laplacian_(e.j, e.j) += e.weight;
    laplacian_(e.i, e.j) -= e.weight;
    laplacian_(e.j, e.i) -= e.weight;
  }
}

DenseMatrix SimilarityGraph::adjacency() const {
  DenseMatrix a(n_, n_);
  for (const Edge& e : edges_) {
    a(e.i, e.j) = e.weight;
    a(e.j, e.i) = e.weight;
  }
  return a;
}

bool SimilarityGraph::connected() const {
  if (n_ == 0) return true;
  std::vector<std::vector<std::size_t>> adj(n_);
  for (const Edge& e : edges_) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<char> seen(n_, 0);
  std::vector<std::size_t> stack = {0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == n_;
}

SimilarityGraph knn_graph(const DenseMatrix& features, std::size_t k) {
  const std::size_t n = features.rows();
  if (k < 1 || k >= n)
    throw BadK("knn_graph: k=" + std::to_string(k) + " outside [1, n-1]");
  const std::size_t d = features.cols();

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = features(i, c) - features(j, c);
        s += diff * diff;
      }
      dist[j] = {s, j};
    }
    dist[i] = {std::numeric_limits<double>::infinity(), i};  // exclude self
    // (distance, index) ordering makes ties deterministic toward lower index
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end());
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t j = dist[t].second;
      pairs.insert({std::min(i, j), std::max(i, j)});
    }
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) edges.push_back({i, j, 1.0});
  return SimilarityGraph(n, std::move(edges));
}

SimilarityGraph perturb_edges(const SimilarityGraph& g, double proportion,
                              std::uint64_t seed) {
  if (proportion < 0.0 || proportion > 1.0)
    throw BadParameter("perturb_edges: proportion outside [0, 1]");
  const std::size_t n = g.vertex_count();
  const std::size_t ecount = g.edges().size();
  const std::size_t drop = static_cast<std::size_t>(
      std::floor(proportion * static_cast<double>(ecount)));
  if (drop == 0) return g;

  const std::size_t all_pairs = n * (n - 1) / 2;
  if (all_pairs - ecount < drop)
    throw GraphTooDense("perturb_edges: not enough absent pairs to add");

  auto rng = make_rng(seed);

  // Pick edges to remove: partial Fisher-Yates over edge indices.
  std::vector<std::size_t> idx(ecount);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t t = 0; t < drop; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, ecount - 1);
    std::swap(idx[t], idx[pick(rng)]);
  }
  std::vector<char> removed(ecount, 0);
  for (std::size_t t = 0; t < drop; ++t) removed[idx[t]] = 1;

  // Enumerate pairs absent from the input graph, then sample `drop` of them.
  std::vector<char> present(n * n, 0);
  for (const Edge& e : g.edges()) present[e.i * n + e.j] = 1;
  std::vector<std::pair<std::size_t, std::size_t>> absent;
  absent.reserve(all_pairs - ecount);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!present[i * n + j]) absent.push_back({i, j});
  for (std::size_t t = 0; t < drop; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, absent.size() - 1);
    std::swap(absent[t], absent[pick(rng)]);
  }

  std::vector<Edge> edges;
  edges.reserve(ecount);
  for (std::size_t e = 0; e < ecount; ++e)
    if (!removed[e]) edges.push_back(g.edges()[e]);
  for (std::size_t t = 0; t < drop; ++t)
    edges.push_back({absent[t].first, absent[t].second, 1.0});
  return SimilarityGraph(n, std::move(edges));
}

}  // namespace gsgd
