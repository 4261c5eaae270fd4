#include "gsgd/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>

#include "gsgd/dense_kernels.hpp"
#include "gsgd/errors.hpp"
#include "gsgd/graph_operator.hpp"
#include "gsgd/rng.hpp"

namespace gsgd {

namespace {

SimilarityGraph knn_points_graph(std::size_t n, std::size_t k, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  DenseMatrix pts(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    pts(i, 0) = unif(rng);
    pts(i, 1) = unif(rng);
  }
  return knn_graph(pts, k);
}

SimilarityGraph community_graph(std::size_t n, const GraphParams& params,
                                std::uint64_t seed) {
  const std::size_t c = params.communities;
  if (c < 1 || c > n) throw BadParameter("generate_graph: bad community count");
  if (params.intra_p < 0.0 || params.intra_p > 1.0 || params.inter_p < 0.0 ||
      params.inter_p > 1.0)
    throw BadParameter("generate_graph: edge probabilities outside [0, 1]");
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  // Vertex v belongs to community v * c / n (contiguous blocks).
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ci = i * c / n;
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t cj = j * c / n;
      const double p = ci == cj ? params.intra_p : params.inter_p;
      if (unif(rng) < p) edges.push_back({i, j, 1.0});
    }
  }
  return SimilarityGraph(n, std::move(edges));
}

}  // namespace

SimilarityGraph generate_graph(GraphKind kind, const GraphParams& params, std::size_t n,
                               std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 20; ++attempt) {
    const std::uint64_t sub = mix_seed(seed, attempt);
    SimilarityGraph g = kind == GraphKind::KnnUniformPoints
                            ? knn_points_graph(n, params.k, sub)
                            : community_graph(n, params, sub);
    if (g.connected()) return g;
  }
  throw DisconnectedAfterRetries("generate_graph: no connected graph in 20 attempts");
}

DenseMatrix generate_smooth_truth(const SynthConfig& cfg, const SimilarityGraph& g1,
                                  const SimilarityGraph& g2) {
  if (g1.vertex_count() != cfg.m || g2.vertex_count() != cfg.n)
    throw DimensionMismatch("generate_smooth_truth: graph sizes do not match m, n");
  if (cfg.r < 1 || cfg.r > std::min(cfg.m, cfg.n))
    throw RankOutOfRange("generate_smooth_truth: rank outside [1, min(m, n)]");
  if (!(cfg.filter_scale > 0.0) && !cfg.identity_filter)
    throw BadParameter("generate_smooth_truth: filter_scale must be positive");

  auto rng = make_rng(cfg.seed, /*stream=*/7);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix u(cfg.m, cfg.r);
  DenseMatrix v(cfg.n, cfg.r);
  for (std::size_t i = 0; i < u.size(); ++i) u.data()[i] = normal(rng);
  for (std::size_t i = 0; i < v.size(); ++i) v.data()[i] = normal(rng);

  DenseMatrix x;
  if (cfg.identity_filter) {
    x = matmul_a_bt(u, v);
  } else {
    // The Tikhonov filter g(s) = 1/(1 + scale * s) is exactly the smoothing
    // operator of a GraphOperator with lambda = scale.
    const GraphOperator fw(g1, 0.0, cfg.filter_scale);
    const GraphOperator fh(g2, 0.0, cfg.filter_scale);
    const DenseMatrix au = fw.apply(OperatorKind::Smoother, u);
    const DenseMatrix bv = fh.apply(OperatorKind::Smoother, v);
    x = matmul_a_bt(au, bv);
  }
  const double fn = frobenius_norm(x);
  if (fn == 0.0) throw NumericalError("generate_smooth_truth: degenerate zero truth");
  x *= std::sqrt(static_cast<double>(cfg.m) * static_cast<double>(cfg.n)) / fn;
  return x;
}

SyntheticInstance generate_instance(const SynthConfig& cfg) {
  SyntheticInstance inst;
  inst.g1 = generate_graph(cfg.graph_kind, cfg.graph_params, cfg.m, mix_seed(cfg.seed, 1));
  inst.g2 = generate_graph(cfg.graph_kind, cfg.graph_params, cfg.n, mix_seed(cfg.seed, 2));
  inst.x_star = generate_smooth_truth(cfg, inst.g1, inst.g2);
  return inst;
}

}  // namespace gsgd
