#include "gsgd/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "gsgd/errors.hpp"

namespace gsgd {

namespace {

// R * H for the sparse residual R over Omega; O(|Omega| r).
DenseMatrix residual_times_h(const ObservationSet& obs, const std::vector<double>& res,
                             const DenseMatrix& h) {
  DenseMatrix out(obs.row_count(), h.cols());
  const auto& entries = obs.entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const double v = res[k];
    if (v == 0.0) continue;
    double* oi = out.data() + entries[k].i * out.cols();
    const double* hj = h.data() + entries[k].j * h.cols();
    for (std::size_t c = 0; c < h.cols(); ++c) oi[c] += v * hj[c];
  }
  return out;
}

// R^T * W.
DenseMatrix residual_t_times_w(const ObservationSet& obs, const std::vector<double>& res,
                               const DenseMatrix& w) {
  DenseMatrix out(obs.col_count(), w.cols());
  const auto& entries = obs.entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const double v = res[k];
    if (v == 0.0) continue;
    double* oj = out.data() + entries[k].j * out.cols();
    const double* wi = w.data() + entries[k].i * w.cols();
    for (std::size_t c = 0; c < w.cols(); ++c) oj[c] += v * wi[c];
  }
  return out;
}

// B * S^{-1} for symmetric positive-definite S.
DenseMatrix right_solve(const DenseMatrix& b, const DenseMatrix& s) {
  return transpose(spd_solve(s, transpose(b)));
}

void axpy(DenseMatrix& y, double alpha, const DenseMatrix& x) {
  for (std::size_t k = 0; k < y.size(); ++k) y.data()[k] += alpha * x.data()[k];
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::Gd: return "gd";
    case Method::ScaledGd: return "scaledgd";
    case Method::GlGd: return "glgd";
    case Method::Gsgd: return "gsgd";
  }
  return "?";
}

const char* reason_name(StopReason r) {
  switch (r) {
    case StopReason::Target: return "target";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::Plateau: return "plateau";
    case StopReason::Error: return "error";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "gd") return Method::Gd;
  if (name == "scaledgd") return Method::ScaledGd;
  if (name == "glgd") return Method::GlGd;
  if (name == "gsgd") return Method::Gsgd;
  return std::nullopt;
}

double default_step_size(Method method, double beta, double sigma1_est) {
  switch (method) {
    case Method::Gsgd:
      return 2.0 / (2.0 * (1.0 + beta) + std::sqrt(1.0 + beta));
    case Method::ScaledGd:
      return 0.5;
    case Method::Gd:
    case Method::GlGd:
      return 0.5 / std::max(sigma1_est, 1.0);
  }
  return 0.5;
}

FactorPair gd_step(const FactorPair& f, const ObservationSet& obs, double eta) {
  const std::vector<double> res = masked_residual(obs, f);
  const double scale = -eta / obs.sampling_probability();
  FactorPair out = f;
  axpy(out.w, scale, residual_times_h(obs, res, f.h));
  axpy(out.h, scale, residual_t_times_w(obs, res, f.w));
  return out;
}

FactorPair scaledgd_step(const FactorPair& f, const ObservationSet& obs, double eta) {
  const std::vector<double> res = masked_residual(obs, f);
  // Both preconditioners come from the pre-update factors.
  const DenseMatrix gram_h = matmul_at_b(f.h, f.h);
  const DenseMatrix gram_w = matmul_at_b(f.w, f.w);
  const double scale = -eta / obs.sampling_probability();
  FactorPair out = f;
  axpy(out.w, scale, right_solve(residual_times_h(obs, res, f.h), gram_h));
  axpy(out.h, scale, right_solve(residual_t_times_w(obs, res, f.w), gram_w));
  return out;
}

FactorPair glgd_step(const FactorPair& f, const ObservationSet& obs, double eta,
                     double beta, const DenseMatrix& lap_w, const DenseMatrix& lap_h) {
  if (lap_w.rows() != f.rows() || lap_h.rows() != f.cols())
    throw DimensionMismatch("glgd_step: Laplacian sizes do not match factors");
  const std::vector<double> res = masked_residual(obs, f);
  const double inv_p = 1.0 / obs.sampling_probability();
  FactorPair out = f;
  axpy(out.w, -eta * inv_p, residual_times_h(obs, res, f.h));
  axpy(out.h, -eta * inv_p, residual_t_times_w(obs, res, f.w));
  if (beta != 0.0) {
    axpy(out.w, -eta * beta, matmul(lap_w, f.w));
    axpy(out.h, -eta * beta, matmul(lap_h, f.h));
  }
  return out;
}

FactorPair gsgd_step(const FactorPair& f, const ObservationSet& obs, double eta,
                     const GraphOperator& op_w, const GraphOperator& op_h) {
  if (op_w.size() != f.rows() || op_h.size() != f.cols())
    throw DimensionMismatch("gsgd_step: operator sizes do not match factors");
  const std::vector<double> res = masked_residual(obs, f);
  const DenseMatrix gram_h = matmul_at_b(f.h, f.h);
  const DenseMatrix gram_w = matmul_at_b(f.w, f.w);
  const double scale = -eta / obs.sampling_probability();
  // L (R H (H^T H)^{-1}) equals (L R) H (H^T H)^{-1}; apply L to the thin
  // m x r product instead of the m x n residual.
  DenseMatrix dir_w = right_solve(residual_times_h(obs, res, f.h), gram_h);
  dir_w = op_w.apply(OperatorKind::HigherOrder, dir_w);
  DenseMatrix dir_h = right_solve(residual_t_times_w(obs, res, f.w), gram_w);
  dir_h = op_h.apply(OperatorKind::HigherOrder, dir_h);
  FactorPair out = f;
  axpy(out.w, scale, dir_w);
  axpy(out.h, scale, dir_h);
  return out;
}

SolverTrace run(const SolverConfig& config, const ObservationSet& obs,
                const SimilarityGraph* g1, const SimilarityGraph* g2,
                const DenseMatrix* truth, const std::vector<ObsEntry>* holdout) {
  if (config.max_iters < 1) throw BadParameter("run: max_iters must be >= 1");
  if (config.eta && !(*config.eta > 0.0))
    throw BadParameter("run: step size must be positive");
  if (config.beta < 0.0 || config.lambda < 0.0)
    throw BadParameter("run: beta and lambda must be >= 0");

  const bool needs_graphs = config.method == Method::GlGd ||
                            config.method == Method::Gsgd ||
                            config.init == InitKind::Graph;
  if (needs_graphs && (g1 == nullptr || g2 == nullptr))
    throw MissingGraph("run: method or init requires both similarity graphs");

  const GraphOperator op_w = g1 ? GraphOperator(*g1, config.beta, config.lambda)
                                : GraphOperator::identity(obs.row_count());
  const GraphOperator op_h = g2 ? GraphOperator(*g2, config.beta, config.lambda)
                                : GraphOperator::identity(obs.col_count());
  if (op_w.size() != obs.row_count() || op_h.size() != obs.col_count())
    throw DimensionMismatch("run: graph sizes do not match observations");

  TopRSvd init_svd;
  FactorPair f =
      config.init == InitKind::Graph
          ? graph_spectral_init(obs, op_w, op_h, config.rank, config.seed, init_svd)
          : standard_spectral_init(obs, config.rank, config.seed, init_svd);

  const double sigma1_est = init_svd.s.empty() ? 0.0 : init_svd.s.front();
  const double eta =
      config.eta ? *config.eta
                 : default_step_size(config.method, config.beta, sigma1_est);

  double radius = 0.0;
  if (config.projection.mode == ProjectionConfig::Mode::Fixed) {
    if (!(config.projection.radius > 0.0))
      throw BadRadius("run: fixed projection radius must be positive");
    radius = config.projection.radius;
  } else if (config.projection.mode == ProjectionConfig::Mode::Auto) {
    // sigma1 and mu are unobservable; estimate both from the initialization.
    const double mu_est =
        std::max(measured_graph_incoherence(init_svd.u, init_svd.v, op_w, op_h), 1.0);
    if (sigma1_est > 0.0)
      radius = incoherent_radius(sigma1_est, mu_est, config.rank, config.beta,
                                 config.projection.c_b);
  }
  const bool project = radius > 0.0;
  if (project) f = project_b(f, op_w, op_h, radius);

  SolverTrace trace;
  trace.eta_used = eta;
  trace.projection_radius = radius;
  trace.factors = f;
  trace.reason = StopReason::MaxIters;

  const bool have_test = truth != nullptr || holdout != nullptr;
  auto test_rmse_of = [&](const FactorPair& fp) {
    if (truth) return rmse_complement(*truth, obs, fp);
    if (holdout) return rmse_holdout(*holdout, fp);
    return std::numeric_limits<double>::quiet_NaN();
  };

  const DenseMatrix* lap_w = g1 ? &g1->laplacian() : nullptr;
  const DenseMatrix* lap_h = g2 ? &g2->laplacian() : nullptr;

  double prev_train = -1.0;
  int flat_streak = 0;
  using clock = std::chrono::steady_clock;
  for (std::size_t it = 1; it <= config.max_iters; ++it) {
    const auto t0 = clock::now();
    try {
      switch (config.method) {
        case Method::Gd:
          f = gd_step(f, obs, eta);
          break;
        case Method::ScaledGd:
          f = scaledgd_step(f, obs, eta);
          break;
        case Method::GlGd:
          f = glgd_step(f, obs, eta, config.beta, *lap_w, *lap_h);
          break;
        case Method::Gsgd:
          f = gsgd_step(f, obs, eta, op_w, op_h);
          break;
      }
      if (project) f = project_b(f, op_w, op_h, radius);
      if (!f.w.all_finite() || !f.h.all_finite())
        throw NonFinite("iterate diverged to NaN/Inf");
    } catch (const NumericalError& e) {
      trace.reason = StopReason::Error;
      trace.diagnostic = std::string("iteration ") + std::to_string(it) + ": " + e.what();
      break;
    }

    TraceRecord rec;
    rec.iter = it;
    rec.train_rmse = train_rmse(obs, f);
    rec.test_rmse = test_rmse_of(f);
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    trace.records.push_back(rec);
    trace.factors = f;

    const double stop_metric = have_test ? rec.test_rmse : rec.train_rmse;
    if (config.target_rmse && stop_metric <= *config.target_rmse) {
      trace.reason = StopReason::Target;
      break;
    }
    if (prev_train >= 0.0 && config.rel_change_tol > 0.0) {
      const double change =
          std::abs(rec.train_rmse - prev_train) / std::max(prev_train, 1e-300);
      flat_streak = change < config.rel_change_tol ? flat_streak + 1 : 0;
      if (flat_streak >= 10) {
        trace.reason = StopReason::Plateau;
        break;
      }
    }
    prev_train = rec.train_rmse;
  }
  return trace;
}

}  // namespace gsgd
