#include <doctest.h>

#include <set>

#include "gsgd/errors.hpp"
#include "gsgd/graph.hpp"
#include "support/test_util.hpp"

using namespace gsgd;
using namespace gsgd::testutil;

namespace {

std::set<std::pair<std::size_t, std::size_t>> edge_set(const SimilarityGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> s;
  for (const Edge& e : g.edges()) s.insert({e.i, e.j});
  return s;
}

SimilarityGraph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return SimilarityGraph(n, std::move(edges));
}

}  // namespace

TEST_CASE("SimilarityGraph: Laplacian row sums vanish and diagonal carries degrees") {
  const SimilarityGraph g(4, {{0, 1, 2.0}, {1, 2, 1.0}, {0, 3, 0.5}});
  const DenseMatrix& l = g.laplacian();
  for (std::size_t i = 0; i < 4; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < 4; ++j) row_sum += l(i, j);
    CHECK(std::abs(row_sum) <= 1e-10);
  }
  CHECK(l(0, 0) == doctest::Approx(2.5));
  CHECK(l(0, 1) == doctest::Approx(-2.0));
}

TEST_CASE("SimilarityGraph: rejects self-loops, duplicates and bad weights") {
  CHECK_THROWS_AS(SimilarityGraph(3, {{1, 1, 1.0}}), BadParameter);
  CHECK_THROWS_AS(SimilarityGraph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), BadParameter);
  CHECK_THROWS_AS(SimilarityGraph(3, {{0, 1, 0.0}}), BadParameter);
  CHECK_THROWS_AS(SimilarityGraph(2, {{0, 5, 1.0}}), BadParameter);
}

TEST_CASE("knn_graph: three collinear points with k = 1") {
  DenseMatrix pts(3, 1);
  pts(0, 0) = 0.0;
  pts(1, 0) = 1.0;
  pts(2, 0) = 10.0;
  const SimilarityGraph g = knn_graph(pts, 1);
  // Exhaustive pairwise distances: 0's nearest is 1, 1's nearest is 0,
  // 2's nearest is 1. Union gives exactly {(0,1), (1,2)}.
  CHECK(edge_set(g) == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
}

TEST_CASE("knn_graph: k = n-1 gives the complete graph") {
  const DenseMatrix pts = random_matrix(7, 2, 42);
  const SimilarityGraph g = knn_graph(pts, 6);
  CHECK(g.edges().size() == 21);
}

TEST_CASE("knn_graph: duplicate points resolve deterministically") {
  DenseMatrix pts(4, 2);  // all four at the origin
  const SimilarityGraph a = knn_graph(pts, 2);
  const SimilarityGraph b = knn_graph(pts, 2);
  CHECK(edge_set(a) == edge_set(b));
  // ties break toward the lower index: vertex 0 picks 1 and 2, etc.
  CHECK(edge_set(a).count({0, 1}) == 1);
  CHECK(edge_set(a).count({0, 2}) == 1);
}

TEST_CASE("knn_graph: bad k") {
  const DenseMatrix pts = random_matrix(5, 2, 1);
  CHECK_THROWS_AS(knn_graph(pts, 0), BadK);
  CHECK_THROWS_AS(knn_graph(pts, 5), BadK);
}

TEST_CASE("perturb_edges: proportion 0 is the identity") {
  const SimilarityGraph g = path_graph(6);
  const SimilarityGraph p = perturb_edges(g, 0.0, 9);
  CHECK(edge_set(p) == edge_set(g));
}

TEST_CASE("perturb_edges: full replacement on a 4-vertex path") {
  const SimilarityGraph g = path_graph(4);
  const auto before = edge_set(g);
  const SimilarityGraph p = perturb_edges(g, 1.0, 123);
  const auto after = edge_set(p);
  CHECK(after.size() == 3);
  for (const auto& e : after) CHECK(before.count(e) == 0);  // all former non-edges
}

TEST_CASE("perturb_edges: preserves edge count and is deterministic") {
  const DenseMatrix pts = random_matrix(30, 2, 4);
  const SimilarityGraph g = knn_graph(pts, 4);
  for (double prop : {0.1, 0.3, 0.7}) {
    const SimilarityGraph a = perturb_edges(g, prop, 55);
    const SimilarityGraph b = perturb_edges(g, prop, 55);
    CHECK(a.edges().size() == g.edges().size());
    CHECK(edge_set(a) == edge_set(b));
  }
}

TEST_CASE("perturb_edges: too dense to add") {
  // complete graph on 4 vertices: no absent pairs at all
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) edges.push_back({i, j, 1.0});
  const SimilarityGraph g(4, std::move(edges));
  CHECK_THROWS_AS(perturb_edges(g, 0.5, 1), GraphTooDense);
}
