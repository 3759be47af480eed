#include "pnn/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pnn {

namespace {

constexpr double kAdmitFraction = 0.9;
constexpr std::size_t kProbeChunk = 1 << 14;

double growth(double delta) { return 1.0 + std::sqrt(2.0) / std::sqrt(1.0 - std::cos(delta)); }

void check_delta(double delta) {
  if (!(delta > 0.0) || delta > std::numbers::pi / 2.0 + 1e-15) {
    fail(ErrorKind::DomainError, "delta must lie in (0, pi/2]");
  }
}

double log_binomial(Eigen::Index n, Eigen::Index k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

// Angle in [0, pi/2] between the line through unit u and the unit vectors in
// the columns of net, minimized over columns.
double min_line_angle(const Matrix& net, const Vector& u) {
  if (net.cols() == 0) return std::numbers::pi / 2.0;
  const double c = std::min(1.0, (net.transpose() * u).cwiseAbs().maxCoeff());
  return 2.0 * std::asin(std::min(1.0, std::sqrt(std::max(0.0, 2.0 - 2.0 * c)) / 2.0));
}

Vector random_unit(Rng& rng, Eigen::Index d) {
  for (;;) {
    const Vector g = gaussian_vector(rng, d);
    const double n = g.norm();
    if (n > kZeroTol) return g / n;
  }
}

}  // namespace

double net_size_bound(Eigen::Index n, double delta) {
  check_delta(delta);
  if (n < 1) fail(ErrorKind::DomainError, "dimension must be positive");
  return 0.5 * std::pow(growth(delta), static_cast<double>(n));
}

double sparse_net_size(Eigen::Index d, Eigen::Index s, double delta, std::optional<Eigen::Index> k) {
  check_delta(delta);
  if (s < 1 || s > d) fail(ErrorKind::DomainError, "need 1 <= s <= d");
  const double base = std::pow(growth(delta), static_cast<double>(s));
  if (k) {
    if (*k < 1) fail(ErrorKind::DomainError, "k must be positive");
    return 0.5 * static_cast<double>(*k) * base;
  }
  return 0.5 * std::exp(log_binomial(d, s)) * base;
}

AngularNet greedy_angular_net(Eigen::Index d, double delta, std::uint64_t seed, std::size_t max_probes) {
  check_delta(delta);
  if (d < 1) fail(ErrorKind::ParameterOutOfRange, "dimension must be positive");
  if (max_probes < 1) fail(ErrorKind::ParameterOutOfRange, "max_probes must be positive");
  Rng rng(derive_seed(seed, 0x4e4554));
  const double admit = kAdmitFraction * delta;
  const std::size_t budget = 1000 * max_probes;
  Matrix net(d, 0);
  std::size_t streak = 0;
  std::size_t used = 0;
  while (streak < max_probes) {
    if (used >= budget) fail(ErrorKind::CoverageNotReached, "probe budget exhausted before coverage");
    ++used;
    Vector u = random_unit(rng, d);
    if (min_line_angle(net, u) > admit) {
      u = canonicalize_vector(u).unit;
      net.conservativeResize(Eigen::NoChange, net.cols() + 1);
      net.col(net.cols() - 1) = u;
      streak = 0;
    } else {
      ++streak;
    }
  }
  AngularNet out;
  out.dim = d;
  out.delta = delta;
  out.vectors = std::move(net);
  out.probes_used = used;
  return out;
}

double angle_to_net(const AngularNet& net, const Vector& v) {
  if (v.size() != net.dim) fail(ErrorKind::DimensionMismatch, "vector does not match net dimension");
  if (!(v.norm() > kZeroTol)) fail(ErrorKind::ZeroVector, "angle undefined for zero vector");
  return min_line_angle(net.vectors, v.normalized());
}

double coverage_gap(const AngularNet& net, std::size_t n_probes, std::uint64_t seed) {
  if (net.size() == 0) fail(ErrorKind::ParameterOutOfRange, "net is empty");
  const std::size_t chunks = (n_probes + kProbeChunk - 1) / kProbeChunk;
  std::vector<double> worst(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(derive_seed(seed, c));
    const std::size_t m = std::min(kProbeChunk, n_probes - c * kProbeChunk);
    double w = 0.0;
    for (std::size_t i = 0; i < m; ++i) w = std::max(w, min_line_angle(net.vectors, random_unit(rng, net.dim)));
    worst[c] = w;
  });
  return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

NetApproximation nearest_net_approx(const Matrix& target, const AngularNet& net) {
  if (net.size() == 0) fail(ErrorKind::ParameterOutOfRange, "net is empty");
  if (target.rows() != net.dim) fail(ErrorKind::DimensionMismatch, "weights do not match net dimension");
  NetApproximation out;
  out.weights = Matrix::Zero(target.rows(), target.cols());
  out.angles = Vector::Zero(target.cols());
  for (Eigen::Index i = 0; i < target.cols(); ++i) {
    const Vector w = target.col(i);
    const double norm = w.norm();
    if (!(norm > kZeroTol)) continue;
    const Vector dots = net.vectors.transpose() * (w / norm);
    Eigen::Index best = 0;
    dots.cwiseAbs().maxCoeff(&best);
    const Vector u = dots(best) < 0.0 ? Vector(-net.vectors.col(best)) : Vector(net.vectors.col(best));
    out.weights.col(i) = norm * u;
    out.angles(i) = angle_between(w, u);
    out.max_angle = std::max(out.max_angle, out.angles(i));
  }
  return out;
}

double minimax_risk_bound(Eigen::Index k, double m, Eigen::Index d, double delta) {
  return static_cast<double>(k) * m * std::sqrt(2.0 * static_cast<double>(d) * (1.0 - std::cos(delta)));
}

ReluGap relu_gap(const Vector& w1, const Vector& w2, const Vector& x) {
  if (w1.size() != w2.size() || w1.size() != x.size()) fail(ErrorKind::DimensionMismatch, "sizes differ");
  ReluGap out;
  out.gap = std::abs(relu(w1.dot(x)) - relu(w2.dot(x)));
  out.bound = (w1 - w2).norm() * x.norm();
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(x.size()) *
                      (w1.norm() + w2.norm()) * x.norm();
  out.holds = out.gap <= out.bound * (1.0 + 1e-12) + slack;
  return out;
}

McEstimate mean_abs_gap(const Matrix& weights, const Matrix& approx, std::size_t n_samples, std::uint64_t seed) {
  if (weights.rows() != approx.rows()) fail(ErrorKind::DimensionMismatch, "weight dimensions differ");
  if (n_samples < 2) fail(ErrorKind::ParameterOutOfRange, "need at least two Monte Carlo samples");
  const std::size_t chunks = (n_samples + kProbeChunk - 1) / kProbeChunk;
  std::vector<double> sums(chunks, 0.0);
  std::vector<double> sq(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(derive_seed(seed, c));
    const auto m = static_cast<Eigen::Index>(std::min(kProbeChunk, n_samples - c * kProbeChunk));
    const Matrix xs = gaussian_matrix(rng, weights.rows(), m);
    const Vector g = (network_outputs(xs, weights) - network_outputs(xs, approx)).cwiseAbs();
    sums[c] = g.sum();
    sq[c] = g.squaredNorm();
  });
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sums[c];
    s2 += sq[c];
  }
  const auto n = static_cast<double>(n_samples);
  McEstimate out;
  out.estimate = s / n;
  out.samples = n_samples;
  out.standard_error = std::sqrt(std::max(0.0, (s2 - n * out.estimate * out.estimate) / (n - 1.0)) / n);
  return out;
}

}  // namespace pnn
