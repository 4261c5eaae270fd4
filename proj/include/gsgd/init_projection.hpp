#pragma once

#include <cstdint>

#include "gsgd/dense_kernels.hpp"
#include "gsgd/factors.hpp"
#include "gsgd/graph_operator.hpp"
#include "gsgd/observation.hpp"

namespace gsgd {

struct ProjectionConfig {
  enum class Mode { Disabled, Fixed, Auto };
  Mode mode = Mode::Disabled;  // projection is optional; iterates usually stay
                               // incoherent without it
  double radius = 0.0;         // used in Fixed mode; must be > 0
  double c_b = 1.1;            // radius multiplier in Auto mode
};

// Factors W0 = U0 S0^{1/2}, H0 = V0 S0^{1/2} of the top-r SVD of the rescaled
// observed matrix Y / p.
FactorPair standard_spectral_init(const ObservationSet& obs, std::size_t r,
                                  std::uint64_t seed);

// Same, but of A (Y / p) B with the smoothing operators of the two graphs.
// With lambda = 0 both operators are the identity and the output matches
// standard_spectral_init bitwise.
FactorPair graph_spectral_init(const ObservationSet& obs, const GraphOperator& op_w,
                               const GraphOperator& op_h, std::size_t r,
                               std::uint64_t seed);

// Variants exposing the underlying SVD (the solver uses its top singular
// value and singular vectors to calibrate an automatic projection radius).
FactorPair standard_spectral_init(const ObservationSet& obs, std::size_t r,
                                  std::uint64_t seed, TopRSvd& svd_out);
FactorPair graph_spectral_init(const ObservationSet& obs, const GraphOperator& op_w,
                               const GraphOperator& op_h, std::size_t r,
                               std::uint64_t seed, TopRSvd& svd_out);

// Row-wise shrinking projection enforcing the weighted 2,inf bounds
//   sqrt(m) ||L_W^{1/2} W (H~^T L_H H~)^{1/2}||_{2,inf} <= B   (and the H twin).
// Both scaling families are evaluated on the pre-projection weighted factors.
FactorPair project_b(const FactorPair& f_tilde, const GraphOperator& op_w,
                     const GraphOperator& op_h, double b);

// B = c_b * sqrt(mu * r * (1 + beta)) * sigma1.
double incoherent_radius(double sigma1_est, double mu_est, std::size_t r, double beta,
                         double c_b);

// Measured graph incoherence of orthonormal factor columns:
// max(m/r ||L_W^{1/2} U||^2_{2,inf}, n/r ||L_H^{1/2} V||^2_{2,inf}).
double measured_graph_incoherence(const DenseMatrix& u, const DenseMatrix& v,
                                  const GraphOperator& op_w, const GraphOperator& op_h);

}  // namespace gsgd
