#include <doctest.h>

#include <cmath>
#include <random>

#include "gsgd/diagnostics.hpp"
#include "gsgd/errors.hpp"
#include "gsgd/init_projection.hpp"
#include "gsgd/synthetic.hpp"
#include "support/projection_oracle.hpp"
#include "support/test_util.hpp"

using namespace gsgd;
using namespace gsgd::testutil;

namespace {

SimilarityGraph random_graph(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});  // spanning path
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j)
      if (unif(rng) < 0.3) edges.push_back({i, j, 1.0});
  return SimilarityGraph(n, std::move(edges));
}

FactorPair balanced_factors(const DenseMatrix& x, std::size_t r,
                            std::vector<double>* sigma = nullptr) {
  const TopRSvd svd = top_r_svd(x, r, 0);
  FactorPair f;
  f.w = svd.u;
  f.h = svd.v;
  for (std::size_t k = 0; k < r; ++k) {
    const double root = std::sqrt(svd.s[k]);
    for (std::size_t i = 0; i < f.w.rows(); ++i) f.w(i, k) *= root;
    for (std::size_t i = 0; i < f.h.rows(); ++i) f.h(i, k) *= root;
  }
  if (sigma) *sigma = svd.s;
  return f;
}

}  // namespace

TEST_CASE("standard_spectral_init: exact SVD of a fully observed rank-r truth") {
  const DenseMatrix x = random_rank_r(12, 10, 3, 5);
  const ObservationSet obs = bernoulli_sample(x, 1.0, 0.0, 0);
  const FactorPair f = standard_spectral_init(obs, 3, 0);
  CHECK(frobenius_norm(f.product() - x) <= 1e-8 * frobenius_norm(x));
}

TEST_CASE("standard_spectral_init: zero observations give zero factors") {
  std::vector<ObsEntry> entries = {{0, 0, 0.0}, {1, 2, 0.0}};
  const ObservationSet obs(3, 3, std::move(entries), 0.5);
  const FactorPair f = standard_spectral_init(obs, 1, 0);
  CHECK(max_abs(f.w) == 0.0);
  CHECK(max_abs(f.h) == 0.0);
}

TEST_CASE("standard_spectral_init: balanced Gram matrices") {
  const DenseMatrix x = random_matrix(15, 12, 9);
  const ObservationSet obs = bernoulli_sample(x, 0.8, 0.0, 1);
  TopRSvd svd;
  const FactorPair f = standard_spectral_init(obs, 4, 0, svd);
  const DenseMatrix gw = matmul_at_b(f.w, f.w);
  const DenseMatrix gh = matmul_at_b(f.h, f.h);
  DenseMatrix sigma(4, 4);
  for (std::size_t k = 0; k < 4; ++k) sigma(k, k) = svd.s[k];
  CHECK(max_abs_diff(gw, sigma) <= 1e-8 * svd.s[0]);
  CHECK(max_abs_diff(gh, sigma) <= 1e-8 * svd.s[0]);
}

TEST_CASE("graph_spectral_init: lambda = 0 degenerates to the standard init bitwise") {
  const DenseMatrix x = random_matrix(10, 8, 3);
  const ObservationSet obs = bernoulli_sample(x, 0.5, 0.0, 2);
  const SimilarityGraph g1 = random_graph(10, 4);
  const SimilarityGraph g2 = random_graph(8, 5);
  const GraphOperator op_w(g1, 1.0, 0.0);
  const GraphOperator op_h(g2, 1.0, 0.0);
  const FactorPair graph = graph_spectral_init(obs, op_w, op_h, 2, 0);
  const FactorPair standard = standard_spectral_init(obs, 2, 0);
  CHECK(max_abs_diff(graph.w, standard.w) == 0.0);
  CHECK(max_abs_diff(graph.h, standard.h) == 0.0);
}

TEST_CASE("graph_spectral_init: fully observed rank-r truth recovers A X B") {
  const std::size_t r = 2;
  const DenseMatrix x = random_rank_r(9, 7, r, 8);
  const ObservationSet obs = bernoulli_sample(x, 1.0, 0.0, 0);
  const SimilarityGraph g1 = random_graph(9, 6);
  const SimilarityGraph g2 = random_graph(7, 7);
  const GraphOperator op_w(g1, 1.0, 1.0);
  const GraphOperator op_h(g2, 1.0, 1.0);
  const FactorPair f = graph_spectral_init(obs, op_w, op_h, r, 0);
  DenseMatrix axb = op_w.apply(OperatorKind::Smoother, x);
  axb = transpose(op_h.apply(OperatorKind::Smoother, transpose(axb)));
  CHECK(frobenius_norm(f.product() - axb) <= 1e-8 * frobenius_norm(axb));
}

TEST_CASE("graph init lands closer to the truth than standard init on smooth data") {
  // Euclidean stacked-factor distance to the aligned truth, smooth instances.
  const std::size_t trials = 50;
  std::size_t wins = 0;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    SynthConfig cfg;
    cfg.m = 200;
    cfg.n = 200;
    cfg.r = 5;
    cfg.seed = seed;
    const SyntheticInstance inst = generate_instance(cfg);
    const ObservationSet obs = bernoulli_sample(inst.x_star, 0.1, 0.0, seed + 1000);
    const GraphOperator op_w(inst.g1, 1.0, 1.0);
    const GraphOperator op_h(inst.g2, 1.0, 1.0);
    const FactorPair f_graph = graph_spectral_init(obs, op_w, op_h, 5, 0);
    const FactorPair f_std = standard_spectral_init(obs, 5, 0);

    const FactorPair f_star = balanced_factors(inst.x_star, 5);
    const GraphOperator id_w = GraphOperator::identity(200);
    const GraphOperator id_h = GraphOperator::identity(200);
    const std::vector<double> ones(5, 1.0);
    const double d_graph = aligned_distance(f_graph, f_star, id_w, id_h, ones).dist;
    const double d_std = aligned_distance(f_std, f_star, id_w, id_h, ones).dist;
    if (d_graph < d_std) ++wins;
  }
  CHECK(wins >= (trials * 9) / 10);
}

TEST_CASE("project_b: inactive constraints return the factors unchanged") {
  const SimilarityGraph g1 = random_graph(6, 1);
  const SimilarityGraph g2 = random_graph(5, 2);
  const GraphOperator op_w(g1, 1.0, 1.0);
  const GraphOperator op_h(g2, 1.0, 1.0);
  FactorPair f;
  f.w = random_matrix(6, 2, 3);
  f.h = random_matrix(5, 2, 4);
  const FactorPair out = project_b(f, op_w, op_h, 1e6);
  CHECK(max_abs_diff(out.w, f.w) <= 1e-12 * std::max(1.0, max_abs(f.w)));
  CHECK(max_abs_diff(out.h, f.h) <= 1e-12 * std::max(1.0, max_abs(f.h)));
}

TEST_CASE("project_b: scalar closed form") {
  // m = n = r = 1, no graph: W~ = 2, H~ = 1, B = 1 shrinks both by 1/2.
  const GraphOperator id1 = GraphOperator::identity(1);
  FactorPair f;
  f.w = DenseMatrix(1, 1);
  f.h = DenseMatrix(1, 1);
  f.w(0, 0) = 2.0;
  f.h(0, 0) = 1.0;
  const FactorPair out = project_b(f, id1, id1, 1.0);
  CHECK(out.w(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(out.h(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(project_b(f, id1, id1, 0.0), BadRadius);
}

TEST_CASE("project_b: matches the numerically solved constrained minimizer") {
  std::mt19937_64 rng(2024);
  for (int inst = 0; inst < 4; ++inst) {
    const std::size_t m = 4 + rng() % 5;
    const std::size_t n = 4 + rng() % 5;
    const std::size_t r = 1 + rng() % 3;
    const SimilarityGraph g1 = random_graph(m, rng());
    const SimilarityGraph g2 = random_graph(n, rng());
    const GraphOperator op_w(g1, 1.0, 1.0);
    const GraphOperator op_h(g2, 1.0, 1.0);
    FactorPair f;
    f.w = random_matrix(m, r, rng());
    f.h = random_matrix(n, r, rng());
    // radius chosen so some rows clip
    const ProjectionProblem warm = make_projection_problem(f, op_w, op_h, 1.0);
    double max_norm = 0.0;
    {
      const DenseMatrix g = matmul(matmul(warm.c_w, f.w), warm.k_w);
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < r; ++c) s += g(i, c) * g(i, c);
        max_norm = std::max(max_norm, std::sqrt(static_cast<double>(m) * s));
      }
    }
    const double b = 0.6 * std::max(max_norm, 1e-6);
    const ProjectionProblem prob = make_projection_problem(f, op_w, op_h, b);

    const FactorPair closed = project_b(f, op_w, op_h, b);
    const FactorPair numeric = solve_projection_numerically(prob);
    const double obj_closed = projection_objective(prob, closed);
    const double obj_numeric = projection_objective(prob, numeric);
    CHECK(std::abs(obj_closed - obj_numeric) <= 1e-6 * std::max(1.0, obj_numeric));
    CHECK(projection_violation(prob, closed) <= 1e-8 * b);
  }
}

TEST_CASE("project_b: idempotent once constraints are satisfied") {
  std::mt19937_64 rng(31337);
  for (int inst = 0; inst < 5; ++inst) {
    const std::size_t m = 5 + rng() % 4;
    const std::size_t n = 5 + rng() % 4;
    const std::size_t r = 1 + rng() % 3;
    const SimilarityGraph g1 = random_graph(m, rng());
    const SimilarityGraph g2 = random_graph(n, rng());
    const GraphOperator op_w(g1, 1.0, 1.0);
    const GraphOperator op_h(g2, 1.0, 1.0);
    FactorPair f;
    f.w = random_matrix(m, r, rng());
    f.h = random_matrix(n, r, rng());
    const double b = 0.5 * std::sqrt(static_cast<double>(m));
    const FactorPair once = project_b(f, op_w, op_h, b);
    const FactorPair twice = project_b(once, op_w, op_h, b);
    const double scale = std::max(1.0, max_abs(once.w));
    CHECK(max_abs_diff(once.w, twice.w) <= 1e-10 * scale);
    CHECK(max_abs_diff(once.h, twice.h) <= 1e-10 * scale);
  }
}

TEST_CASE("project_b: post-projection feasibility and non-expansiveness") {
  std::mt19937_64 rng(555);
  for (int inst = 0; inst < 5; ++inst) {
    const std::size_t m = 8;
    const std::size_t n = 6;
    const std::size_t r = 2;
    const SimilarityGraph g1 = random_graph(m, rng());
    const SimilarityGraph g2 = random_graph(n, rng());
    const double beta = 1.0;
    const GraphOperator op_w(g1, beta, 1.0);
    const GraphOperator op_h(g2, beta, 1.0);

    const DenseMatrix x = random_rank_r(m, n, r, rng());
    std::vector<double> sigma;
    const FactorPair f_star = balanced_factors(x, r, &sigma);
    const double sigma_r = sigma.back();

    // Theorem-regime perturbation: spiky on one row, scaled to 0.1 sigma_r.
    FactorPair f = f_star;
    DenseMatrix pw(m, r);
    pw(0, 0) = 1.0;
    pw(0, 1) = -0.5;
    DenseMatrix ph = random_matrix(n, r, rng());
    const double eps = 0.1;
    for (double scale : {1.0}) {
      (void)scale;
      FactorPair probe = f_star;
      probe.w += pw;
      probe.h += ph;
      const AlignmentResult d0 =
          aligned_distance(probe, f_star, op_w, op_h, sigma);
      const double shrink = eps * sigma_r / std::max(d0.dist, 1e-12);
      f = f_star;
      DenseMatrix sw = pw;
      sw *= shrink;
      DenseMatrix sh = ph;
      sh *= shrink;
      f.w += sw;
      f.h += sh;
    }
    const AlignmentResult before = aligned_distance(f, f_star, op_w, op_h, sigma);
    REQUIRE(before.dist <= 0.2 * sigma_r);

    const double mu = graph_incoherence_mu(x, r, op_w, op_h);
    const double b =
        incoherent_radius(sigma.front(), mu, r, beta, 1.0 + 2.0 * eps);
    const FactorPair projected = project_b(f, op_w, op_h, b);
    const AlignmentResult after =
        aligned_distance(projected, f_star, op_w, op_h, sigma);
    CHECK(after.dist <= before.dist * (1.0 + 1e-8));

    // graph incoherence condition on the projected pair
    const DenseMatrix lw_wh = op_w.apply(OperatorKind::HigherOrderSqrt,
                                         projected.product());
    double worst_w = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += lw_wh(i, j) * lw_wh(i, j);
      worst_w = std::max(worst_w, std::sqrt(static_cast<double>(m) * s));
    }
    CHECK(worst_w <= b * (1.0 + 1e-8));
    const DenseMatrix lh_hw = op_h.apply(OperatorKind::HigherOrderSqrt,
                                         transpose(projected.product()));
    double worst_h = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += lh_hw(j, i) * lh_hw(j, i);
      worst_h = std::max(worst_h, std::sqrt(static_cast<double>(n) * s));
    }
    CHECK(worst_h <= b * (1.0 + 1e-8));
  }
}

TEST_CASE("incoherent_radius: closed-form arithmetic") {
  CHECK(incoherent_radius(1.0, 1.0, 1, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(incoherent_radius(2.0, 1.0, 1, 0.0, 1.0) == doctest::Approx(2.0));
  const double ratio =
      incoherent_radius(1.0, 1.0, 1, 1.0, 1.0) / incoherent_radius(1.0, 1.0, 1, 0.0, 1.0);
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(incoherent_radius(-1.0, 1.0, 1, 0.0, 1.0), BadParameter);
}
