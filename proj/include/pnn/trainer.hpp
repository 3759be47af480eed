#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pnn/common.hpp"
#include "pnn/lines.hpp"

namespace pnn {

struct TrainConfig {
  Eigen::Index batch_size = 100;
  Eigen::Index epochs = 200;
  double learning_rate = 0.01;
  double momentum = 0.9;
  // lr *= decay_rate every decay_every_steps mini-batch steps
  double decay_rate = 0.95;
  Eigen::Index decay_every_steps = 390;
  // Early stop once the mean of the last early_stop_window epoch losses falls
  // below early_stop_threshold; a window of 0 disables it.
  Eigen::Index early_stop_window = 10;
  double early_stop_threshold = 1e-5;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
};

TrainConfig matched_defaults();
TrainConfig mismatched_defaults();

struct Dataset {
  Matrix x;  // d x n
  Vector y;

  Eigen::Index size() const { return y.size(); }
};

// x ~ N(0, I), y = h(x; W*).
Dataset generate_dataset(const Matrix& target, Eigen::Index n, std::uint64_t seed);

// r random lines with two neurons each (k = 2r): one coordinate drawn from
// U(0, 1), the other from U(-1, 0).
PNNWeights init_random_pnn(Eigen::Index d, Eigen::Index r, std::uint64_t seed);

struct TrainResult {
  Matrix weights;
  LineConfigPtr config;
  double final_train_loss = 0.0;
  double final_test_loss_normalized = std::numeric_limits<double>::quiet_NaN();
  Eigen::Index epochs_run = 0;
  RegionSignature final_signature;
  bool line_feasibility_ok = true;
  double max_line_deviation = 0.0;  // worst per-epoch value
  std::vector<double> trajectory;   // mean mini-batch loss per epoch

  // Final weights snapped onto their lines.
  PNNWeights pnn() const;
};

// Mini-batch SGD with momentum on the mean squared error. With projection on,
// each column's gradient is replaced by its component along the column's line.
// Throws ConfigError or Diverged.
TrainResult sgd_train(const Dataset& train, const PNNWeights& init, const TrainConfig& config, bool projection,
                      const Dataset* test = nullptr);

// sum (yhat - y)^2 / sum y^2
double normalized_mse(const Matrix& weights, const Dataset& data);

double mean_squared_error(const Matrix& weights, const Dataset& data);

enum class Outcome { Global, BadLocal, NotConverged };

const char* to_string(Outcome outcome);

struct OutcomeReport {
  Outcome outcome = Outcome::NotConverged;
  double population_loss = 0.0;
  bool stationary = false;
  // Fewer than d lines carry mixed signs.
  bool violates_mixed_condition = false;
  Eigen::Index single_sign_lines = 0;
};

// Global if the population risk against target is <= loss_tol; BadLocal if
// the projected population gradient is within grad_tol of zero; otherwise
// NotConverged.
OutcomeReport classify_outcome(const TrainResult& result, const Matrix& target, double loss_tol = 1e-4,
                               double grad_tol = 1e-2);

struct TrialRow {
  std::string experiment;
  Eigen::Index d = 0;
  Eigen::Index k = 0;
  Eigen::Index k_star = 0;
  Eigen::Index trial = 0;
  Eigen::Index init = 0;
  std::uint64_t seed = 0;
  Eigen::Index epochs_run = 0;
  double final_train_loss = 0.0;
  double normalized_test_mse = std::numeric_limits<double>::quiet_NaN();
  double population_loss = 0.0;
  double weight_gap = std::numeric_limits<double>::quiet_NaN();  // |W - W*|_F^2, matched only
  Outcome outcome = Outcome::NotConverged;
  Eigen::Index signature_violations = 0;  // single-sign lines at the end
  bool feasibility_ok = true;
};

struct MatchedSummary {
  std::vector<TrialRow> rows;
  double fraction_global = 0.0;
};

struct MatchedSpec {
  Eigen::Index d = 5;
  Eigen::Index k = 10;
  Eigen::Index trials = 20;
  Eigen::Index samples = 2000;
  TrainConfig config = matched_defaults();
  std::uint64_t seed = 0;
  double loss_tol = 1e-4;
  double grad_tol = 1e-2;
};

// Degree-one ground truth and initialization with N(0, 1) coordinates, k/d
// neurons per axis, projected SGD.
MatchedSummary experiment_matched_degree_one(const MatchedSpec& spec);

struct MismatchedStats {
  Eigen::Index k = 0;
  Eigen::Index runs = 0;  // feasible runs
  double min = 0.0;
  double mean = 0.0;
  double median = 0.0;
};

struct MismatchedSummary {
  std::vector<TrialRow> rows;
  std::vector<MismatchedStats> stats;  // one per entry of k_list
};

struct MismatchedSpec {
  Eigen::Index d = 15;
  Eigen::Index k_star = 20;
  std::vector<Eigen::Index> k_list{10, 20, 40, 80};
  Eigen::Index trials = 10;
  Eigen::Index inits = 5;
  Eigen::Index samples = 4000;  // per fold
  TrainConfig config = mismatched_defaults();
  std::uint64_t seed = 0;
};

// Per trial: an unconstrained ground truth with w* ~ N(0, I/d), one training
// and one test fold; per k: `inits` random PNNs with r = k/2 trained with
// projection. Statistics use feasible runs only.
MismatchedSummary experiment_mismatched_random(const MismatchedSpec& spec);

}  // namespace pnn
