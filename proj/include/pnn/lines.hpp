#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pnn/common.hpp"

namespace pnn {

struct CanonicalVector {
  Vector unit;
  int sign = 1;  // +1 if the input already had canonical orientation
};

// Normalizes v and flips it so that the entry at the largest index with
// magnitude above kZeroTol is positive. Throws ZeroVector for |v| <= kZeroTol.
CanonicalVector canonicalize_vector(const Vector& v);

// Orientation sign of v under the canonical rule; +1 for zero vectors.
int orientation_sign(const Vector& v);

// A finite set of lines through the origin, stored as canonical unit vectors
// (columns of unit_vectors()), with the pairwise angle and Gram matrices.
class LineSet {
 public:
  LineSet() = default;

  // Columns of raw are the direction vectors. Throws ZeroVector or
  // DuplicateLine.
  static LineSet from_vectors(const Matrix& raw);
  static LineSet from_vectors(const std::vector<Vector>& raw);
  // Columns already unit norm (within 1e-12) and canonically oriented; kept
  // bit-for-bit. Throws DomainError otherwise.
  static LineSet from_units(const Matrix& units);

  Eigen::Index dim() const { return units_.rows(); }
  Eigen::Index size() const { return units_.cols(); }
  const Matrix& unit_vectors() const { return units_; }
  const Matrix& angles() const { return angles_; }
  const Matrix& gram() const { return gram_; }
  Vector line(Eigen::Index i) const { return units_.col(i); }

  LineSet with_line(const Vector& v) const;
  LineSet subset(const std::vector<Eigen::Index>& indices) const;

  // Index of a line collinear with v, or -1.
  Eigen::Index find_collinear(const Vector& v) const;

 private:
  static LineSet build(Matrix units);

  Matrix units_;
  Matrix angles_;
  Matrix gram_;
};

// U_a^T U_b with entries clamped to [-1, 1]. Throws DimensionMismatch.
Matrix cross_gram(const LineSet& a, const LineSet& b);

// r directions uniform on the sphere, canonicalized; near-collinear draws are
// rejected and redrawn. Deterministic in seed.
LineSet random_line_set(Eigen::Index d, Eigen::Index r, std::uint64_t seed);

// Standard coordinate axes e_1..e_d.
LineSet axis_line_set(Eigen::Index d);

// Surjective assignment of neurons to lines (0-based line indices).
class NeuronLineMap {
 public:
  NeuronLineMap() = default;
  NeuronLineMap(std::vector<Eigen::Index> assignment, Eigen::Index num_lines);

  // Neuron i goes to line i / (k / r); requires r | k.
  static NeuronLineMap blocks(Eigen::Index k, Eigen::Index r);
  // One neuron per line.
  static NeuronLineMap identity(Eigen::Index r);

  Eigen::Index num_neurons() const { return static_cast<Eigen::Index>(assignment_.size()); }
  Eigen::Index num_lines() const { return num_lines_; }
  Eigen::Index line_of(Eigen::Index neuron) const { return assignment_[neuron]; }
  const std::vector<Eigen::Index>& assignment() const { return assignment_; }
  const std::vector<Eigen::Index>& neurons_on(Eigen::Index line) const { return groups_[line]; }

  bool operator==(const NeuronLineMap& other) const {
    return num_lines_ == other.num_lines_ && assignment_ == other.assignment_;
  }

 private:
  std::vector<Eigen::Index> assignment_;
  std::vector<std::vector<Eigen::Index>> groups_;
  Eigen::Index num_lines_ = 0;
};

struct LineConfig {
  LineSet lines;
  NeuronLineMap map;
};

using LineConfigPtr = std::shared_ptr<const LineConfig>;

LineConfigPtr make_config(LineSet lines, NeuronLineMap map);

// Weight matrix W (d x k) whose column i lies on line g(i).
class PNNWeights {
 public:
  PNNWeights() = default;
  // Throws DimensionMismatch or InfeasibleWeights.
  PNNWeights(LineConfigPtr config, Matrix weights);

  // Column i = coordinates(i) * u_{g(i)}.
  static PNNWeights from_coordinates(LineConfigPtr config, const Vector& coordinates);

  const Matrix& matrix() const { return weights_; }
  const LineConfigPtr& config() const { return config_; }
  const LineSet& lines() const { return config_->lines; }
  const NeuronLineMap& map() const { return config_->map; }
  Eigen::Index dim() const { return weights_.rows(); }
  Eigen::Index num_neurons() const { return weights_.cols(); }

  // Signed length of each column along its line: <w_i, u_{g(i)}>.
  Vector coordinates() const;
  // Largest distance of a column from its line.
  double max_line_deviation() const;

 private:
  LineConfigPtr config_;
  Matrix weights_;
};

double max_line_deviation(const Matrix& weights, const LineConfig& config);

enum class LineSign { AllPlus, AllMinus, Mixed };

struct RegionSignature {
  // signs[l][j] is the orientation of the j-th neuron on line l.
  std::vector<std::vector<int>> signs;
  std::vector<LineSign> summary;
  // zero[l][j] marks columns that were zero (sign reported as +1 and ignored
  // by summary).
  std::vector<std::vector<bool>> zero;

  Eigen::Index mixed_count() const;
  bool all_lines_single_sign() const { return mixed_count() == 0; }
};

// Builds a signature from per-neuron signs grouped by the map.
RegionSignature make_signature(const NeuronLineMap& map, const std::vector<int>& neuron_signs,
                               const std::vector<bool>& neuron_zero = {});

struct Decomposition {
  Vector q;  // per-line mass: sum of column norms on the line
  RegionSignature signature;
};

Decomposition decompose_weights(const PNNWeights& weights);

}  // namespace pnn
