#pragma once

#include <cstdint>

#include "pnn/common.hpp"
#include "pnn/lines.hpp"

namespace pnn {

// Population risk E[(h(x; W) - h(x; W*))^2], x ~ N(0, I), split into the
// part driven by the summed weight vectors and the psi-kernel part.
struct RiskBreakdown {
  double linear_term = 0.0;  // (1/4) |sum w - sum w*|^2
  double kernel_term = 0.0;
  double total = 0.0;
};

// h(x; W) = sum_i relu(w_i^T x).
double network_output(const Vector& x, const Matrix& weights);

// Network outputs for every column of xs (d x n).
Vector network_outputs(const Matrix& xs, const Matrix& weights);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

// Sample mean of (h(x; W) - h(x; W*))^2 using antithetic pairs (x, -x);
// the standard error is computed over pair means. n_samples is rounded up
// to an even count.
McEstimate monte_carlo_risk(const Matrix& weights, const Matrix& target, std::size_t n_samples,
                            std::uint64_t seed);

// d = 1 network with k scalar weights.
RiskBreakdown scalar_risk(const Vector& w, const Vector& w_star);

// Lines are the coordinate axes; map[i] is the axis of column i for both W
// and W*. The kernel matrix is written out directly (unit diagonal, 2/pi
// elsewhere).
RiskBreakdown degree_one_risk(const Matrix& weights, const Matrix& target, const NeuronLineMap& map);

// Both weight sets must share the same line configuration.
RiskBreakdown matched_risk(const PNNWeights& weights, const PNNWeights& target);

RiskBreakdown mismatched_risk(const PNNWeights& weights, const PNNWeights& target);

// Wraps an unconstrained weight matrix as a PNN: each nonzero column defines
// a line (collinear columns share one); zero columns ride on line 0.
PNNWeights as_pnn(const Matrix& weights);

// Angle between two nonzero vectors, accurate near 0 and pi.
double angle_between(const Vector& a, const Vector& b);

// E[1{w1^T x > 0, w2^T x > 0} x x^T] for x ~ N(0, I).
Matrix truncated_covariance(const Vector& w1, const Vector& w2);

}  // namespace pnn
