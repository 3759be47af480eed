#pragma once

#include <string>
#include <vector>

#include "pnn/common.hpp"
#include "pnn/kernel.hpp"
#include "pnn/lines.hpp"

namespace pnn {

enum class RegionLabel { OnlyGlobal, OnlyBadLocal, NoOptima, MayHaveBadLocal, GoodRegion };

const char* to_string(RegionLabel label);

struct RegionClassification {
  RegionLabel label = RegionLabel::MayHaveBadLocal;
  // Lines whose neurons all share one sign (the ones that break the
  // mixed-sign condition).
  std::vector<Eigen::Index> single_sign_lines;
  std::string witness;
};

// Four-way case analysis for a scalar (d = 1) network in the orthant given by
// the neuron signs s, against ground truth w_star.
RegionClassification scalar_region_classify(const std::vector<int>& s, const Vector& w_star);

struct ScalarHessian {
  Matrix hessian;  // (1/2) 11^T + (1/2) s s^T
  Eigen::Index rank = 0;
};

ScalarHessian scalar_hessian(const std::vector<int>& s);

// True iff at least d lines carry neurons of both signs.
bool region_condition(const RegionSignature& signature, Eigen::Index d);

// GoodRegion when region_condition holds, MayHaveBadLocal otherwise.
RegionClassification classify_region(const RegionSignature& signature, Eigen::Index d);

// Probability that uniformly random neuron signs (t neurons on each of r
// lines) land in a region with at least d mixed lines.
double good_region_probability(Eigen::Index r, Eigen::Index d, Eigen::Index t);

struct OptimumCheck {
  bool optimal = false;
  double sum_residual = 0.0;   // |sum w - sum w*|
  double mass_residual = 0.0;  // |q - q*|
  double kernel_min_eigenvalue = 0.0;
  double risk = 0.0;  // matched risk at W
  // When false the kernel is not positive definite (lambda_min <= kPdTol) and
  // `optimal` is only a sufficient condition for zero risk.
  bool iff_holds = false;
};

OptimumCheck global_optimum_check(const PNNWeights& weights, const PNNWeights& target, double tol = 1e-9);

struct Gradient {
  Matrix full;       // d x k, column j is the gradient with respect to w_j
  Vector projected;  // <grad_j, u_{g(j)}>
};

// Population-risk gradient 2 sum_i T(w_i, w_j) w_i - 2 sum_i T(w*_i, w_j) w*_i
// with T the truncated covariance. target holds the ground-truth columns (any
// line structure). Throws ZeroColumn if a column of W vanishes.
Gradient analytic_gradient(const PNNWeights& weights, const Matrix& target);

bool stationarity_check(const PNNWeights& weights, const Matrix& target, double tol);

struct BadRegionStationary {
  Vector z;  // sum w - sum w* at the stationary point
  Vector q;  // per-line masses solving the stationarity condition
};

// Closed-form stationary point inside a region where every line carries a
// single sign (line_signs[l] = +-1). w0 is the summed ground-truth weight.
// Throws SingularProjector when U U^T is rank deficient.
BadRegionStationary bad_region_z(const LineSet& lines, const std::vector<int>& line_signs,
                                 const KernelBundle& kernel, const Vector& q_star, const Vector& w0);

// Loss at a local minimum in an all-single-sign region with w0 = 0:
// (1/4) q*^T (psi_star - cross^T (psi_LL + S U^T U S)^{-1} cross) q*.
// line_signs defaults to all +1. Throws SingularKernel.
double bad_region_loss(const KernelBundle& kernel, const LineSet& lines, const Vector& q_star,
                       const std::vector<int>& line_signs = {});

}  // namespace pnn
