#include "pnn/lines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pnn {

namespace {

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Gram matrix with exact unit diagonal, exact symmetry and clamped entries.
Matrix clamped_gram(const Matrix& units) {
  Matrix g = units.transpose() * units;
  g = 0.5 * (g + g.transpose()).eval();
  g = g.unaryExpr([](double x) { return clamp_unit(x); });
  g.diagonal().setOnes();
  return g;
}

}  // namespace

CanonicalVector canonicalize_vector(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > kZeroTol)) fail(ErrorKind::ZeroVector, "cannot orient a zero vector");
  Vector unit = v / norm;
  int sign = 1;
  for (Eigen::Index i = unit.size() - 1; i >= 0; --i) {
    if (std::abs(unit(i)) > kZeroTol) {
      sign = unit(i) > 0.0 ? 1 : -1;
      break;
    }
  }
  if (sign < 0) unit = -unit;
  return {std::move(unit), sign};
}

int orientation_sign(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > kZeroTol)) return 1;
  for (Eigen::Index i = v.size() - 1; i >= 0; --i) {
    if (std::abs(v(i)) / norm > kZeroTol) return v(i) > 0.0 ? 1 : -1;
  }
  return 1;
}

LineSet LineSet::from_vectors(const Matrix& raw) {
  Matrix units(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    units.col(j) = canonicalize_vector(raw.col(j)).unit;
  }
  return build(std::move(units));
}

LineSet LineSet::from_units(const Matrix& units) {
  for (Eigen::Index j = 0; j < units.cols(); ++j) {
    const Vector u = units.col(j);
    if (!(std::abs(u.norm() - 1.0) <= 1e-12)) fail(ErrorKind::DomainError, "column " + std::to_string(j) + " is not unit norm");
    if (orientation_sign(u) < 0) fail(ErrorKind::DomainError, "column " + std::to_string(j) + " is not canonically oriented");
  }
  return build(units);
}

LineSet LineSet::build(Matrix units) {
  LineSet set;
  set.units_ = std::move(units);
  set.gram_ = clamped_gram(set.units_);
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    for (Eigen::Index j = i + 1; j < set.size(); ++j) {
      // Checked on the raw product; the clamped Gram loses the sign of |x|>1.
      const double c = std::abs(set.units_.col(i).dot(set.units_.col(j)));
      if (c >= 1.0 - kCollinearityTol) {
        std::ostringstream msg;
        msg << "lines " << i << " and " << j << " are collinear (|cos| = " << c << ")";
        fail(ErrorKind::DuplicateLine, msg.str());
      }
    }
  }
  set.angles_ = set.gram_.unaryExpr([](double x) { return std::acos(x); });
  set.angles_.diagonal().setZero();
  return set;
}

LineSet LineSet::from_vectors(const std::vector<Vector>& raw) {
  if (raw.empty()) return from_vectors(Matrix(0, 0));
  Matrix m(raw.front().size(), static_cast<Eigen::Index>(raw.size()));
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (raw[j].size() != m.rows()) fail(ErrorKind::DimensionMismatch, "vectors differ in dimension");
    m.col(static_cast<Eigen::Index>(j)) = raw[j];
  }
  return from_vectors(m);
}

LineSet LineSet::with_line(const Vector& v) const {
  if (v.size() != dim() && size() > 0) fail(ErrorKind::DimensionMismatch, "new line has wrong dimension");
  Matrix raw(v.size(), size() + 1);
  if (size() > 0) raw.leftCols(size()) = units_;
  raw.col(size()) = v;
  return from_vectors(raw);
}

LineSet LineSet::subset(const std::vector<Eigen::Index>& indices) const {
  Matrix raw(dim(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) raw.col(static_cast<Eigen::Index>(j)) = units_.col(indices[j]);
  return from_vectors(raw);
}

Eigen::Index LineSet::find_collinear(const Vector& v) const {
  const double norm = v.norm();
  if (!(norm > kZeroTol)) return -1;
  for (Eigen::Index j = 0; j < size(); ++j) {
    if (std::abs(units_.col(j).dot(v) / norm) >= 1.0 - kCollinearityTol) return j;
  }
  return -1;
}

Matrix cross_gram(const LineSet& a, const LineSet& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "line sets live in different dimensions");
  Matrix g = a.unit_vectors().transpose() * b.unit_vectors();
  return g.unaryExpr([](double x) { return clamp_unit(x); });
}

LineSet random_line_set(Eigen::Index d, Eigen::Index r, std::uint64_t seed) {
  if (d < 1 || r < 1) fail(ErrorKind::ParameterOutOfRange, "random_line_set needs d >= 1 and r >= 1");
  Rng rng(derive_seed(seed, 0x4c494e45));
  Matrix units(d, r);
  const Eigen::Index max_rejections = 1000 + 10 * r;
  Eigen::Index rejections = 0;
  for (Eigen::Index j = 0; j < r;) {
    Vector g = gaussian_vector(rng, d);
    if (!(g.norm() > kZeroTol)) continue;
    Vector u = canonicalize_vector(g).unit;
    bool collides = false;
    for (Eigen::Index i = 0; i < j && !collides; ++i) {
      collides = std::abs(units.col(i).dot(u)) >= 1.0 - kCollinearityTol;
    }
    if (collides) {
      if (++rejections > max_rejections) {
        fail(ErrorKind::TooManyCollisions, "could not draw non-collinear lines");
      }
      continue;
    }
    units.col(j++) = u;
  }
  return LineSet::from_vectors(units);
}

LineSet axis_line_set(Eigen::Index d) { return LineSet::from_vectors(Matrix::Identity(d, d)); }

NeuronLineMap::NeuronLineMap(std::vector<Eigen::Index> assignment, Eigen::Index num_lines)
    : assignment_(std::move(assignment)), groups_(static_cast<std::size_t>(num_lines)), num_lines_(num_lines) {
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    const Eigen::Index line = assignment_[i];
    if (line < 0 || line >= num_lines_) {
      fail(ErrorKind::ConfigError, "neuron " + std::to_string(i) + " maps outside the line set");
    }
    groups_[static_cast<std::size_t>(line)].push_back(static_cast<Eigen::Index>(i));
  }
  for (Eigen::Index l = 0; l < num_lines_; ++l) {
    if (groups_[static_cast<std::size_t>(l)].empty()) {
      fail(ErrorKind::ConfigError, "line " + std::to_string(l) + " has no neurons");
    }
  }
}

NeuronLineMap NeuronLineMap::blocks(Eigen::Index k, Eigen::Index r) {
  if (r < 1 || k % r != 0) fail(ErrorKind::ConfigError, "neuron count must be a multiple of the line count");
  const Eigen::Index per_line = k / r;
  std::vector<Eigen::Index> assignment(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) assignment[static_cast<std::size_t>(i)] = i / per_line;
  return NeuronLineMap(std::move(assignment), r);
}

NeuronLineMap NeuronLineMap::identity(Eigen::Index r) { return blocks(r, r); }

LineConfigPtr make_config(LineSet lines, NeuronLineMap map) {
  if (map.num_lines() != lines.size()) {
    fail(ErrorKind::ConfigError, "neuron map and line set disagree on the number of lines");
  }
  return std::make_shared<const LineConfig>(LineConfig{std::move(lines), std::move(map)});
}

double max_line_deviation(const Matrix& weights, const LineConfig& config) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < weights.cols(); ++i) {
    const Vector u = config.lines.line(config.map.line_of(i));
    const Vector w = weights.col(i);
    worst = std::max(worst, (w - w.dot(u) * u).norm());
  }
  return worst;
}

PNNWeights::PNNWeights(LineConfigPtr config, Matrix weights)
    : config_(std::move(config)), weights_(std::move(weights)) {
  if (!config_) fail(ErrorKind::ConfigError, "missing line configuration");
  if (weights_.rows() != config_->lines.dim() || weights_.cols() != config_->map.num_neurons()) {
    fail(ErrorKind::DimensionMismatch, "weight matrix shape does not match the line configuration");
  }
  for (Eigen::Index i = 0; i < weights_.cols(); ++i) {
    const Vector u = config_->lines.line(config_->map.line_of(i));
    const Vector w = weights_.col(i);
    const double off = (w - w.dot(u) * u).norm();
    if (off > kFeasibilityTol * std::max(1.0, w.norm())) {
      std::ostringstream msg;
      msg << "column " << i << " is " << off << " away from its line";
      fail(ErrorKind::InfeasibleWeights, msg.str());
    }
  }
}

PNNWeights PNNWeights::from_coordinates(LineConfigPtr config, const Vector& coordinates) {
  if (coordinates.size() != config->map.num_neurons()) {
    fail(ErrorKind::DimensionMismatch, "one coordinate per neuron expected");
  }
  Matrix w(config->lines.dim(), coordinates.size());
  for (Eigen::Index i = 0; i < coordinates.size(); ++i) {
    w.col(i) = coordinates(i) * config->lines.line(config->map.line_of(i));
  }
  return PNNWeights(std::move(config), std::move(w));
}

Vector PNNWeights::coordinates() const {
  Vector t(num_neurons());
  for (Eigen::Index i = 0; i < num_neurons(); ++i) {
    t(i) = weights_.col(i).dot(lines().line(map().line_of(i)));
  }
  return t;
}

double PNNWeights::max_line_deviation() const { return pnn::max_line_deviation(weights_, *config_); }

Eigen::Index RegionSignature::mixed_count() const {
  return static_cast<Eigen::Index>(std::count(summary.begin(), summary.end(), LineSign::Mixed));
}

RegionSignature make_signature(const NeuronLineMap& map, const std::vector<int>& neuron_signs,
                               const std::vector<bool>& neuron_zero) {
  RegionSignature sig;
  const auto r = static_cast<std::size_t>(map.num_lines());
  sig.signs.resize(r);
  sig.zero.resize(r);
  sig.summary.resize(r);
  for (std::size_t l = 0; l < r; ++l) {
    bool plus = false;
    bool minus = false;
    for (Eigen::Index i : map.neurons_on(static_cast<Eigen::Index>(l))) {
      const auto idx = static_cast<std::size_t>(i);
      const bool is_zero = !neuron_zero.empty() && neuron_zero[idx];
      const int s = is_zero ? 1 : neuron_signs[idx];
      sig.signs[l].push_back(s);
      sig.zero[l].push_back(is_zero);
      if (is_zero) continue;
      (s > 0 ? plus : minus) = true;
    }
    sig.summary[l] = (plus && minus) ? LineSign::Mixed : (minus ? LineSign::AllMinus : LineSign::AllPlus);
  }
  return sig;
}

Decomposition decompose_weights(const PNNWeights& weights) {
  const auto& map = weights.map();
  Decomposition out;
  out.q = Vector::Zero(map.num_lines());
  std::vector<int> signs(static_cast<std::size_t>(weights.num_neurons()));
  std::vector<bool> zero(static_cast<std::size_t>(weights.num_neurons()));
  for (Eigen::Index i = 0; i < weights.num_neurons(); ++i) {
    const Vector w = weights.matrix().col(i);
    const double norm = w.norm();
    const auto idx = static_cast<std::size_t>(i);
    zero[idx] = !(norm > kZeroTol);
    signs[idx] = zero[idx] ? 1 : orientation_sign(w);
    out.q(map.line_of(i)) += norm;
  }
  out.signature = make_signature(map, signs, zero);
  return out;
}

}  // namespace pnn
