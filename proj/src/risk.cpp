#include "pnn/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pnn/kernel.hpp"

namespace pnn {

namespace {

constexpr std::size_t kPairsPerChunk = 1 << 15;

RiskBreakdown make_breakdown(const Vector& sum_gap, double kernel_quadratic) {
  RiskBreakdown out;
  out.linear_term = 0.25 * sum_gap.squaredNorm();
  out.kernel_term = 0.25 * kernel_quadratic;
  out.total = out.linear_term + out.kernel_term;
  return out;
}

bool same_config(const LineConfigPtr& a, const LineConfigPtr& b) {
  if (a == b) return true;
  return a->map == b->map && a->lines.unit_vectors() == b->lines.unit_vectors();
}

struct RunningMoments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void merge(const RunningMoments& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }
};

}  // namespace

double network_output(const Vector& x, const Matrix& weights) {
  if (x.size() != weights.rows()) fail(ErrorKind::DimensionMismatch, "input and weight dimensions differ");
  double h = 0.0;
  for (Eigen::Index i = 0; i < weights.cols(); ++i) h += relu(weights.col(i).dot(x));
  return h;
}

Vector network_outputs(const Matrix& xs, const Matrix& weights) {
  if (xs.rows() != weights.rows()) fail(ErrorKind::DimensionMismatch, "input and weight dimensions differ");
  return (weights.transpose() * xs).cwiseMax(0.0).colwise().sum().transpose();
}

McEstimate monte_carlo_risk(const Matrix& weights, const Matrix& target, std::size_t n_samples,
                            std::uint64_t seed) {
  if (weights.rows() != target.rows()) fail(ErrorKind::DimensionMismatch, "W and W* differ in input dimension");
  if (n_samples < 1) fail(ErrorKind::ParameterOutOfRange, "need at least one Monte Carlo sample");
  const Eigen::Index d = weights.rows();
  const std::size_t pairs = (n_samples + 1) / 2;
  const std::size_t chunks = (pairs + kPairsPerChunk - 1) / kPairsPerChunk;
  std::vector<RunningMoments> partial(chunks);
  const Matrix wt = weights.transpose();
  const Matrix tt = target.transpose();

  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kPairsPerChunk;
    const auto m = static_cast<Eigen::Index>(std::min(kPairsPerChunk, pairs - begin));
    Rng rng(derive_seed(seed, c));
    const Matrix xs = gaussian_matrix(rng, d, m);
    const Matrix pw = wt * xs;
    const Matrix pt = tt * xs;
    const Vector plus = pw.cwiseMax(0.0).colwise().sum().transpose() - pt.cwiseMax(0.0).colwise().sum().transpose();
    const Vector minus =
        (-pw).cwiseMax(0.0).colwise().sum().transpose() - (-pt).cwiseMax(0.0).colwise().sum().transpose();
    const Vector v = 0.5 * (plus.array().square() + minus.array().square()).matrix();
    RunningMoments mom;
    mom.count = static_cast<double>(m);
    mom.mean = v.mean();
    mom.m2 = (v.array() - mom.mean).square().sum();
    partial[c] = mom;
  });

  RunningMoments total;
  for (const auto& p : partial) total.merge(p);
  McEstimate out;
  out.estimate = total.mean;
  out.samples = 2 * pairs;
  const double variance = total.count > 1 ? total.m2 / (total.count - 1.0) : 0.0;
  out.standard_error = std::sqrt(variance / total.count);
  return out;
}

RiskBreakdown scalar_risk(const Vector& w, const Vector& w_star) {
  Vector gap(1);
  gap(0) = w.sum() - w_star.sum();
  const double mass_gap = w.cwiseAbs().sum() - w_star.cwiseAbs().sum();
  return make_breakdown(gap, mass_gap * mass_gap);
}

RiskBreakdown degree_one_risk(const Matrix& weights, const Matrix& target, const NeuronLineMap& map) {
  const Eigen::Index d = weights.rows();
  if (target.rows() != d || weights.cols() != map.num_neurons() || target.cols() != map.num_neurons()) {
    fail(ErrorKind::DimensionMismatch, "degree-one weights do not match the map");
  }
  if (map.num_lines() != d) fail(ErrorKind::ConfigMismatch, "degree-one map must cover every axis");
  Vector q = Vector::Zero(d);
  Vector q_star = Vector::Zero(d);
  for (Eigen::Index i = 0; i < map.num_neurons(); ++i) {
    const Eigen::Index axis = map.line_of(i);
    for (const Matrix* m : {&weights, &target}) {
      const Vector col = m->col(i);
      const double off = std::sqrt(std::max(0.0, col.squaredNorm() - col(axis) * col(axis)));
      if (off > kFeasibilityTol * std::max(1.0, col.norm())) {
        fail(ErrorKind::InfeasibleWeights, "column " + std::to_string(i) + " is not on its axis");
      }
    }
    q(axis) += std::abs(weights(axis, i));
    q_star(axis) += std::abs(target(axis, i));
  }
  Matrix c = Matrix::Constant(d, d, 2.0 / std::numbers::pi);
  c.diagonal().setOnes();
  const Vector dq = q - q_star;
  return make_breakdown(weights.rowwise().sum() - target.rowwise().sum(), dq.dot(c * dq));
}

RiskBreakdown matched_risk(const PNNWeights& weights, const PNNWeights& target) {
  if (!same_config(weights.config(), target.config())) {
    fail(ErrorKind::ConfigMismatch, "matched risk needs one shared line configuration");
  }
  const Vector dq = decompose_weights(weights).q - decompose_weights(target).q;
  const Matrix k = psi_apply(weights.lines().gram());
  return make_breakdown(weights.matrix().rowwise().sum() - target.matrix().rowwise().sum(), dq.dot(k * dq));
}

RiskBreakdown mismatched_risk(const PNNWeights& weights, const PNNWeights& target) {
  if (weights.dim() != target.dim()) fail(ErrorKind::DimensionMismatch, "W and W* differ in input dimension");
  const Vector q = decompose_weights(weights).q;
  const Vector q_star = decompose_weights(target).q;
  const KernelBundle b = make_kernel_bundle(weights.lines(), target.lines());
  const double quad = q.dot(b.psi_LL * q) + q_star.dot(b.psi_star * q_star) - 2.0 * q.dot(b.psi_cross * q_star);
  return make_breakdown(weights.matrix().rowwise().sum() - target.matrix().rowwise().sum(), quad);
}

PNNWeights as_pnn(const Matrix& weights) {
  const Eigen::Index d = weights.rows();
  std::vector<Vector> lines;
  std::vector<Eigen::Index> assignment(static_cast<std::size_t>(weights.cols()), -1);
  for (Eigen::Index i = 0; i < weights.cols(); ++i) {
    const Vector w = weights.col(i);
    if (!(w.norm() > kZeroTol)) continue;
    Eigen::Index found = -1;
    for (std::size_t l = 0; l < lines.size() && found < 0; ++l) {
      if (std::abs(lines[l].dot(w)) / w.norm() >= 1.0 - kCollinearityTol) found = static_cast<Eigen::Index>(l);
    }
    if (found < 0) {
      found = static_cast<Eigen::Index>(lines.size());
      lines.push_back(canonicalize_vector(w).unit);
    }
    assignment[static_cast<std::size_t>(i)] = found;
  }
  if (lines.empty()) lines.push_back(Vector::Unit(d, 0));
  for (auto& a : assignment) {
    if (a < 0) a = 0;
  }
  const auto r = static_cast<Eigen::Index>(lines.size());
  // Columns merged onto a shared line are only collinear to kCollinearityTol;
  // snap them onto the line so the feasibility check sees them exactly.
  LineSet set = LineSet::from_vectors(lines);
  Matrix snapped(d, weights.cols());
  for (Eigen::Index i = 0; i < weights.cols(); ++i) {
    const Vector u = set.line(assignment[static_cast<std::size_t>(i)]);
    snapped.col(i) = weights.col(i).dot(u) * u;
  }
  return PNNWeights(make_config(std::move(set), NeuronLineMap(std::move(assignment), r)), std::move(snapped));
}

double angle_between(const Vector& a, const Vector& b) {
  const Vector ua = a.normalized();
  const Vector ub = b.normalized();
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

Matrix truncated_covariance(const Vector& w1, const Vector& w2) {
  if (w1.size() != w2.size()) fail(ErrorKind::DimensionMismatch, "vectors differ in dimension");
  if (!(w1.norm() > kZeroTol) || !(w2.norm() > kZeroTol)) {
    fail(ErrorKind::ZeroVector, "truncated covariance needs nonzero vectors");
  }
  const Eigen::Index d = w1.size();
  const Vector a = w1.normalized();
  const Vector b = w2.normalized();
  const double theta = angle_between(a, b);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  Matrix out = ((std::numbers::pi - theta) / (2.0 * std::numbers::pi)) * Matrix::Identity(d, d);
  const Vector perp = b - c * a;
  if (s > 0.0 && perp.norm() > 0.0) {
    // With b = c a + s n, sin(theta) M(a, b) = s (c (a a^T - n n^T) + s (a n^T + n a^T)),
    // which stays bounded as theta -> 0 and vanishes at theta = pi.
    const Vector n = perp.normalized();
    const Matrix m = c * (a * a.transpose() - n * n.transpose()) + s * (a * n.transpose() + n * a.transpose());
    out += (s / (2.0 * std::numbers::pi)) * m;
  }
  return out;
}

}  // namespace pnn
