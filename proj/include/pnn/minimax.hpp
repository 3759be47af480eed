#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pnn/common.hpp"
#include "pnn/risk.hpp"

namespace pnn {

// Unit vectors on a hemisphere; coverage is measured modulo sign.
struct AngularNet {
  Eigen::Index dim = 0;
  double delta = 0.0;
  Matrix vectors;  // d x m, unit columns
  std::size_t probes_used = 0;

  Eigen::Index size() const { return vectors.cols(); }
};

// (1/2)(1 + sqrt(2)/sqrt(1 - cos delta))^n
double net_size_bound(Eigen::Index n, double delta);

// (1/2) C(d, s) (...)^s, or (k/2)(...)^s when the k sparsity patterns are known.
double sparse_net_size(Eigen::Index d, Eigen::Index s, double delta, std::optional<Eigen::Index> k = std::nullopt);

// Greedy construction: sample uniform directions, keep any probe farther than
// 0.9 delta (modulo sign) from the net, stop after max_probes consecutive
// covered probes. Throws CoverageNotReached when the total budget
// (1000 * max_probes) runs out first.
AngularNet greedy_angular_net(Eigen::Index d, double delta, std::uint64_t seed, std::size_t max_probes = 10000);

// Smallest angle between v and any of +-net.
double angle_to_net(const AngularNet& net, const Vector& v);

// Max over n uniform probes of angle_to_net.
double coverage_gap(const AngularNet& net, std::size_t n_probes, std::uint64_t seed);

struct NetApproximation {
  Matrix weights;          // each column replaced by the nearest +-net direction, norm preserved
  double max_angle = 0.0;  // largest matching angle over columns
  Vector angles;
};

NetApproximation nearest_net_approx(const Matrix& target, const AngularNet& net);

// k M sqrt(2 d (1 - cos delta))
double minimax_risk_bound(Eigen::Index k, double m, Eigen::Index d, double delta);

struct ReluGap {
  double gap = 0.0;    // |relu(w1^T x) - relu(w2^T x)|
  double bound = 0.0;  // |w1 - w2| |x|
  bool holds = false;
};

ReluGap relu_gap(const Vector& w1, const Vector& w2, const Vector& x);

// Monte Carlo estimate of E|h(x; W) - h(x; W_approx)|, x ~ N(0, I).
McEstimate mean_abs_gap(const Matrix& weights, const Matrix& approx, std::size_t n_samples, std::uint64_t seed);

}  // namespace pnn
