#include <doctest.h>

#include <cmath>

#include "gsgd/errors.hpp"
#include "gsgd/graph_operator.hpp"
#include "gsgd/synthetic.hpp"
#include "support/test_util.hpp"

using namespace gsgd;
using namespace gsgd::testutil;

namespace {

const SimilarityGraph& two_path() {
  static const SimilarityGraph g(2, {{0, 1, 1.0}});
  return g;
}

SimilarityGraph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return SimilarityGraph(n, std::move(edges));
}

SimilarityGraph random_knn(std::size_t n, std::uint64_t seed) {
  GraphParams params;
  params.k = 4;
  return generate_graph(GraphKind::KnnUniformPoints, params, n, seed);
}

}  // namespace

TEST_CASE("build_operator: degenerate parameters give identity operators") {
  const GraphOperator none(two_path(), 0.0, 1.0);  // beta = 0
  CHECK(none.is_identity(OperatorKind::HigherOrder));
  CHECK(max_abs_diff(none.dense(OperatorKind::HigherOrder), DenseMatrix::identity(2)) ==
        0.0);
  const GraphOperator flat(two_path(), 1.0, 0.0);  // lambda = 0
  CHECK(flat.is_identity(OperatorKind::Smoother));
  CHECK(flat.is_identity(OperatorKind::HigherOrder));
  const DenseMatrix m = random_matrix(2, 3, 1);
  CHECK(max_abs_diff(flat.apply(OperatorKind::Smoother, m), m) == 0.0);
}

TEST_CASE("build_operator: closed-form 2x2 values at beta = lambda = 1") {
  const GraphOperator op(two_path(), 1.0, 1.0);
  // (I + Lt)^{-1} = [[2,-1],[-1,2]]^{-1} = (1/3) [[2,1],[1,2]]
  const DenseMatrix a = op.dense(OperatorKind::Smoother);
  CHECK(std::abs(a(0, 0) - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(a(0, 1) - 1.0 / 3.0) <= 1e-12);
  const DenseMatrix l = op.dense(OperatorKind::HigherOrder);
  CHECK(std::abs(l(0, 0) - 4.0 / 3.0) <= 1e-12);
  CHECK(std::abs(l(0, 1) + 1.0 / 3.0) <= 1e-12);
  // L eigenvalues {1, 5/3}
  const auto& spec = op.spectrum(OperatorKind::HigherOrder);
  CHECK(std::abs(spec[0] - 1.0) <= 1e-12);
  CHECK(std::abs(spec[1] - 5.0 / 3.0) <= 1e-12);

  DenseMatrix e1(2, 1);
  e1(0, 0) = 1.0;
  const DenseMatrix ae1 = op.apply(OperatorKind::Smoother, e1);
  CHECK(std::abs(ae1(0, 0) - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(ae1(1, 0) - 1.0 / 3.0) <= 1e-12);
}

TEST_CASE("build_operator: rejects negative parameters") {
  CHECK_THROWS_AS(GraphOperator(two_path(), -0.1, 1.0), BadParameter);
  CHECK_THROWS_AS(GraphOperator(two_path(), 1.0, -2.0), BadParameter);
}

TEST_CASE("GraphOperator: spectrum of L stays within [1, 1+beta]") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SimilarityGraph g = random_knn(40, seed);
    const double beta = 0.5 + 0.75 * static_cast<double>(seed);
    const GraphOperator op(g, beta, 1.0);
    for (double v : op.spectrum(OperatorKind::HigherOrder)) {
      CHECK(v >= 1.0 - 1e-10);
      CHECK(v <= 1.0 + beta + 1e-10);
    }
  }
}

TEST_CASE("GraphOperator: square-root semantics and inverse consistency") {
  const SimilarityGraph g = random_knn(25, 11);
  const GraphOperator op(g, 1.0, 1.0);
  const DenseMatrix half = op.dense(OperatorKind::HigherOrderSqrt);
  const DenseMatrix full = op.dense(OperatorKind::HigherOrder);
  CHECK(max_abs_diff(matmul(half, half), full) <= 1e-8);
  const DenseMatrix inv_half = op.dense(OperatorKind::HigherOrderInvSqrt);
  CHECK(max_abs_diff(matmul(inv_half, half), DenseMatrix::identity(25)) <= 1e-8);

  // applying Lhalf twice equals applying L once
  const DenseMatrix m = random_matrix(25, 4, 3);
  const DenseMatrix twice =
      op.apply(OperatorKind::HigherOrderSqrt, op.apply(OperatorKind::HigherOrderSqrt, m));
  CHECK(max_abs_diff(twice, op.apply(OperatorKind::HigherOrder, m)) <= 1e-8);
}

TEST_CASE("GraphOperator: apply matches the dense product") {
  const SimilarityGraph g = random_knn(30, 21);
  const GraphOperator op(g, 0.7, 2.0);
  const DenseMatrix m = random_matrix(30, 5, 9);
  for (OperatorKind kind : {OperatorKind::Smoother, OperatorKind::HigherOrder,
                            OperatorKind::HigherOrderSqrt,
                            OperatorKind::HigherOrderInvSqrt}) {
    const DenseMatrix via_apply = op.apply(kind, m);
    const DenseMatrix via_dense = matmul(op.dense(kind), m);
    CHECK(max_abs_diff(via_apply, via_dense) <= 1e-8 * std::max(1.0, max_abs(m)));
  }
  CHECK_THROWS_AS(op.apply(OperatorKind::Smoother, random_matrix(29, 2, 0)),
                  DimensionMismatch);
}

TEST_CASE("GraphOperator: smoother equals the explicit inverse of I + lambda Lt") {
  const SimilarityGraph g = random_knn(20, 31);
  const double lambda = 0.8;
  const GraphOperator op(g, 1.0, lambda);
  DenseMatrix shifted = g.laplacian();
  shifted *= lambda;
  shifted += DenseMatrix::identity(20);
  // A (I + lambda Lt) should be the identity.
  const DenseMatrix prod = matmul(op.dense(OperatorKind::Smoother), shifted);
  CHECK(max_abs_diff(prod, DenseMatrix::identity(20)) <= 1e-8);
}

TEST_CASE("higher_order_adjacency: 2x2 closed form and degenerate case") {
  const GraphOperator op(two_path(), 1.0, 1.0);
  const DenseMatrix e = higher_order_adjacency(op);
  CHECK(std::abs(e(0, 1) - 1.0 / 3.0) <= 1e-12);
  CHECK(e(0, 0) == 0.0);
  const GraphOperator flat(two_path(), 1.0, 0.0);
  CHECK(max_abs(higher_order_adjacency(flat)) == 0.0);
}

TEST_CASE("higher_order operator properties on connected graphs") {
  for (std::uint64_t seed : {2u, 5u, 8u}) {
    const SimilarityGraph g = random_knn(35, seed);
    const GraphOperator op(g, 1.0, 1.0);
    const DenseMatrix a = op.dense(OperatorKind::Smoother);
    const DenseMatrix e = higher_order_adjacency(op);
    for (std::size_t i = 0; i < 35; ++i) {
      double off_sum = 0.0;
      for (std::size_t j = 0; j < 35; ++j) {
        if (i == j) continue;
        CHECK(-a(i, j) <= 1e-12);  // (I - A) off-diagonal <= 0 up to roundoff
        off_sum += e(i, j);
      }
      // (I - A)_ii equals the sum of the off-diagonal magnitudes in row i
      CHECK(std::abs((1.0 - a(i, i)) - off_sum) <= 1e-10);
      CHECK(1.0 - a(i, i) > 0.0);
    }

    // trace identity: tr(M^T (I - A) M) = 1/2 sum E_ij ||M_i - M_j||^2
    const DenseMatrix m = random_matrix(35, 3, seed + 100);
    const DenseMatrix iam = DenseMatrix::identity(35) - a;
    const double lhs = frobenius_dot(m, matmul(iam, m));
    double rhs = 0.0;
    for (std::size_t i = 0; i < 35; ++i)
      for (std::size_t j = 0; j < 35; ++j) {
        double d2 = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
          const double diff = m(i, c) - m(j, c);
          d2 += diff * diff;
        }
        rhs += e(i, j) * d2;
      }
    rhs *= 0.5;
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("monotone reach on a path graph") {
  const SimilarityGraph g = path_graph(7);
  for (double lambda : {0.1, 1.0, 10.0}) {
    const GraphOperator op(g, 1.0, lambda);
    const DenseMatrix a = op.dense(OperatorKind::Smoother);
    // |(I - A)_{0j}| non-increasing in the distance from vertex 0
    for (std::size_t j = 1; j + 1 < 7; ++j)
      CHECK(std::abs(a(0, j)) >= std::abs(a(0, j + 1)) - 1e-12);
  }
}

TEST_CASE("Laplacian regularizer identity tr(W^T Lt W)") {
  const SimilarityGraph g = random_knn(30, 77);
  const DenseMatrix w = random_matrix(30, 4, 5);
  const double lhs = frobenius_dot(w, matmul(g.laplacian(), w));
  const DenseMatrix adj = g.adjacency();
  double rhs = 0.0;
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < 4; ++c) {
        const double diff = w(i, c) - w(j, c);
        d2 += diff * diff;
      }
      rhs += adj(i, j) * d2;
    }
  rhs *= 0.5;
  CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
}
