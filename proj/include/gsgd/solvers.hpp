#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsgd/factors.hpp"
#include "gsgd/graph.hpp"
#include "gsgd/graph_operator.hpp"
#include "gsgd/init_projection.hpp"
#include "gsgd/observation.hpp"

namespace gsgd {

enum class Method { Gd, ScaledGd, GlGd, Gsgd };
enum class InitKind { Standard, Graph };
enum class StopReason { Target, MaxIters, Plateau, Error };

const char* method_name(Method m);
const char* reason_name(StopReason r);
std::optional<Method> parse_method(const std::string& name);

struct SolverConfig {
  Method method = Method::Gsgd;
  std::size_t rank = 1;
  // Unset step size picks the documented default: the Theorem-style bound
  // 2 / (2(1+beta) + sqrt(1+beta)) for gsgd, 0.5 for scaledgd, and
  // 0.5 / sigma1(init) for the unpreconditioned gd/glgd (a fixed 0.5 step is
  // unstable once sigma1 >> 1, see README).
  std::optional<double> eta;
  double beta = 1.0;
  double lambda = 1.0;
  std::size_t max_iters = 500;
  std::optional<double> target_rmse;  // checked on test RMSE when available
  double rel_change_tol = 1e-7;       // 0 disables the plateau rule
  ProjectionConfig projection;
  InitKind init = InitKind::Graph;
  std::uint64_t seed = 0;
};

double default_step_size(Method method, double beta, double sigma1_est);

struct TraceRecord {
  std::size_t iter = 0;
  double train_rmse = 0.0;
  double test_rmse = 0.0;  // NaN when neither truth nor holdout is available
  double wall_ms = 0.0;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  FactorPair factors;
  StopReason reason = StopReason::MaxIters;
  std::string diagnostic;  // set when reason == Error
  double eta_used = 0.0;
  double projection_radius = 0.0;  // 0 when projection disabled
};

// One iteration of each update rule. Dimension errors throw; singular Gram
// matrices in the preconditioned rules throw NotPositiveDefinite (a rank
// collapse of the iterate).
FactorPair gd_step(const FactorPair& f, const ObservationSet& obs, double eta);
FactorPair scaledgd_step(const FactorPair& f, const ObservationSet& obs, double eta);
FactorPair glgd_step(const FactorPair& f, const ObservationSet& obs, double eta,
                     double beta, const DenseMatrix& lap_w, const DenseMatrix& lap_h);
FactorPair gsgd_step(const FactorPair& f, const ObservationSet& obs, double eta,
                     const GraphOperator& op_w, const GraphOperator& op_h);

// Full solver loop: build operators once, initialize, iterate the configured
// step with optional projection, record the trace, stop on target / budget /
// plateau. Numerical failures mid-run are recorded as StopReason::Error with
// a diagnostic; configuration problems throw.
SolverTrace run(const SolverConfig& config, const ObservationSet& obs,
                const SimilarityGraph* g1 = nullptr, const SimilarityGraph* g2 = nullptr,
                const DenseMatrix* truth = nullptr,
                const std::vector<ObsEntry>* holdout = nullptr);

}  // namespace gsgd
