#include "pnn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pnn/landscape.hpp"
#include "pnn/risk.hpp"

namespace pnn {

namespace {

constexpr double kFeasibleDeviation = 1e-6;

Vector line_coordinates(const Matrix& w, const LineConfig& config) {
  Vector t(w.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j) t(j) = w.col(j).dot(config.lines.line(config.map.line_of(j)));
  return t;
}

RegionSignature signature_of(const Matrix& w, const LineConfig& config) {
  const Vector t = line_coordinates(w, config);
  std::vector<int> signs(static_cast<std::size_t>(t.size()));
  std::vector<bool> zero(static_cast<std::size_t>(t.size()));
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    zero[static_cast<std::size_t>(j)] = std::abs(t(j)) <= kZeroTol;
    signs[static_cast<std::size_t>(j)] = t(j) < 0.0 ? -1 : 1;
  }
  return make_signature(config.map, signs, zero);
}

Eigen::Index single_sign_count(const RegionSignature& sig) {
  return static_cast<Eigen::Index>(std::count_if(sig.summary.begin(), sig.summary.end(),
                                                 [](LineSign s) { return s != LineSign::Mixed; }));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) fail(ErrorKind::ConfigError, "batch_size must be positive");
  if (epochs < 1) fail(ErrorKind::ConfigError, "epochs must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail(ErrorKind::ConfigError, "learning_rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) fail(ErrorKind::ConfigError, "momentum must lie in [0, 1)");
  if (!(decay_rate > 0.0)) fail(ErrorKind::ConfigError, "decay_rate must be positive");
  if (decay_every_steps < 1) fail(ErrorKind::ConfigError, "decay_every_steps must be positive");
  if (early_stop_window < 0) fail(ErrorKind::ConfigError, "early_stop_window must be non-negative");
}

TrainConfig matched_defaults() { return TrainConfig{}; }

TrainConfig mismatched_defaults() {
  TrainConfig c;
  c.epochs = 100;
  c.learning_rate = 1e-3;
  c.momentum = 0.0;
  c.early_stop_window = 0;
  return c;
}

Dataset generate_dataset(const Matrix& target, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) fail(ErrorKind::ParameterOutOfRange, "dataset needs at least one sample");
  Rng rng(derive_seed(seed, 0x44415441));
  Dataset out;
  out.x = gaussian_matrix(rng, target.rows(), n);
  out.y = network_outputs(out.x, target);
  return out;
}

PNNWeights init_random_pnn(Eigen::Index d, Eigen::Index r, std::uint64_t seed) {
  if (r < 1) fail(ErrorKind::ParameterOutOfRange, "need at least one line");
  LineSet lines = random_line_set(d, r, derive_seed(seed, 1));
  Rng rng(derive_seed(seed, 2));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector t(2 * r);
  for (Eigen::Index l = 0; l < r; ++l) {
    t(2 * l) = unit(rng);
    t(2 * l + 1) = -unit(rng);
  }
  return PNNWeights::from_coordinates(make_config(std::move(lines), NeuronLineMap::blocks(2 * r, r)), t);
}

PNNWeights TrainResult::pnn() const {
  const Vector t = line_coordinates(weights, *config);
  return PNNWeights::from_coordinates(config, t);
}

double mean_squared_error(const Matrix& weights, const Dataset& data) {
  return (network_outputs(data.x, weights) - data.y).squaredNorm() / static_cast<double>(data.size());
}

double normalized_mse(const Matrix& weights, const Dataset& data) {
  const double denom = data.y.squaredNorm();
  if (!(denom > 0.0)) fail(ErrorKind::DomainError, "normalized MSE undefined for all-zero targets");
  return (network_outputs(data.x, weights) - data.y).squaredNorm() / denom;
}

TrainResult sgd_train(const Dataset& train, const PNNWeights& init, const TrainConfig& config, bool projection,
                      const Dataset* test) {
  config.validate();
  const Eigen::Index n = train.size();
  if (n < 1) fail(ErrorKind::ConfigError, "training data is empty");
  if (config.batch_size > n) fail(ErrorKind::ConfigError, "batch_size exceeds the number of samples");
  if (train.x.rows() != init.dim()) fail(ErrorKind::DimensionMismatch, "data and weights differ in dimension");

  const LineConfig& lc = *init.config();
  Matrix units(init.dim(), init.num_neurons());
  for (Eigen::Index j = 0; j < units.cols(); ++j) units.col(j) = lc.lines.line(lc.map.line_of(j));

  TrainResult out;
  out.config = init.config();
  Matrix w = init.matrix();
  Matrix velocity = Matrix::Zero(w.rows(), w.cols());
  double lr = config.learning_rate;
  std::int64_t step = 0;
  Rng rng(derive_seed(config.seed, 0x53474421));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  Matrix xb;
  Vector yb;
  for (Eigen::Index epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    Eigen::Index batches = 0;
    for (Eigen::Index start = 0; start < n; start += config.batch_size) {
      const Eigen::Index b = std::min(config.batch_size, n - start);
      xb.resize(w.rows(), b);
      yb.resize(b);
      for (Eigen::Index i = 0; i < b; ++i) {
        const Eigen::Index idx = order[static_cast<std::size_t>(start + i)];
        xb.col(i) = train.x.col(idx);
        yb(i) = train.y(idx);
      }
      const Matrix pre = w.transpose() * xb;  // k x b
      const Vector residual = pre.cwiseMax(0.0).colwise().sum().transpose() - yb;
      const double loss = residual.squaredNorm() / static_cast<double>(b);
      if (!std::isfinite(loss)) fail(ErrorKind::Diverged, "training loss is not finite");
      epoch_loss += loss;
      ++batches;

      const Matrix active = (pre.array() > 0.0).cast<double>().matrix();
      Matrix grad = (2.0 / static_cast<double>(b)) * xb * (active.array().rowwise() * residual.transpose().array()).matrix().transpose();
      if (projection) {
        const Vector along = (grad.array() * units.array()).colwise().sum().transpose();
        grad = units * along.asDiagonal();
      }
      velocity = config.momentum * velocity + grad;
      w -= lr * velocity;
      if (++step % config.decay_every_steps == 0) lr *= config.decay_rate;
    }
    const double mean_loss = epoch_loss / static_cast<double>(batches);
    if (!std::isfinite(mean_loss) || !w.allFinite()) fail(ErrorKind::Diverged, "weights diverged");
    out.trajectory.push_back(mean_loss);
    out.epochs_run = epoch + 1;

    const double dev = max_line_deviation(w, lc);
    out.max_line_deviation = std::max(out.max_line_deviation, dev);
    if (projection && dev > kFeasibleDeviation) out.line_feasibility_ok = false;

    const auto window = static_cast<std::size_t>(config.early_stop_window);
    if (window > 0 && out.trajectory.size() >= window) {
      const double tail =
          std::accumulate(out.trajectory.end() - static_cast<std::ptrdiff_t>(window), out.trajectory.end(), 0.0) /
          static_cast<double>(window);
      if (tail < config.early_stop_threshold) break;
    }
  }
  if (!projection) out.line_feasibility_ok = out.max_line_deviation <= kFeasibleDeviation;

  out.weights = w;
  out.final_train_loss = mean_squared_error(w, train);
  if (test != nullptr) out.final_test_loss_normalized = normalized_mse(w, *test);
  out.final_signature = signature_of(w, lc);
  return out;
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Global: return "Global";
    case Outcome::BadLocal: return "BadLocal";
    case Outcome::NotConverged: return "NotConverged";
  }
  return "Unknown";
}

OutcomeReport classify_outcome(const TrainResult& result, const Matrix& target, double loss_tol, double grad_tol) {
  OutcomeReport out;
  const PNNWeights w = result.pnn();
  out.population_loss = mismatched_risk(w, as_pnn(target)).total;
  out.violates_mixed_condition = !region_condition(result.final_signature, w.dim());
  out.single_sign_lines = single_sign_count(result.final_signature);
  try {
    out.stationary = stationarity_check(w, target, grad_tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroColumn) throw;
    out.stationary = false;
  }
  if (out.population_loss <= loss_tol) {
    out.outcome = Outcome::Global;
  } else if (out.stationary) {
    out.outcome = Outcome::BadLocal;
  } else {
    out.outcome = Outcome::NotConverged;
  }
  return out;
}

MatchedSummary experiment_matched_degree_one(const MatchedSpec& spec) {
  if (spec.d < 1 || spec.k < 1 || spec.k % spec.d != 0) {
    fail(ErrorKind::ParameterOutOfRange, "k must be a positive multiple of d");
  }
  if (spec.trials < 1) fail(ErrorKind::ParameterOutOfRange, "trials must be positive");
  spec.config.validate();
  const LineConfigPtr config = make_config(axis_line_set(spec.d), NeuronLineMap::blocks(spec.k, spec.d));
  MatchedSummary out;
  out.rows.resize(static_cast<std::size_t>(spec.trials));

  parallel_for(out.rows.size(), [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(spec.seed, t);
    Rng truth_rng(derive_seed(trial_seed, 1));
    Rng init_rng(derive_seed(trial_seed, 3));
    const PNNWeights target = PNNWeights::from_coordinates(config, gaussian_vector(truth_rng, spec.k));
    const PNNWeights init = PNNWeights::from_coordinates(config, gaussian_vector(init_rng, spec.k));
    const Dataset data = generate_dataset(target.matrix(), spec.samples, derive_seed(trial_seed, 2));
    TrainConfig cfg = spec.config;
    cfg.seed = derive_seed(trial_seed, 4);
    const TrainResult res = sgd_train(data, init, cfg, true);
    const OutcomeReport rep = classify_outcome(res, target.matrix(), spec.loss_tol, spec.grad_tol);

    TrialRow& row = out.rows[t];
    row.experiment = "matched_degree_one";
    row.d = spec.d;
    row.k = spec.k;
    row.k_star = spec.k;
    row.trial = static_cast<Eigen::Index>(t);
    row.seed = trial_seed;
    row.epochs_run = res.epochs_run;
    row.final_train_loss = res.final_train_loss;
    row.population_loss = rep.population_loss;
    row.weight_gap = (res.weights - target.matrix()).squaredNorm();
    row.outcome = rep.outcome;
    row.signature_violations = rep.single_sign_lines;
    row.feasibility_ok = res.line_feasibility_ok;
  });

  const auto global = std::count_if(out.rows.begin(), out.rows.end(),
                                    [](const TrialRow& r) { return r.outcome == Outcome::Global; });
  out.fraction_global = static_cast<double>(global) / static_cast<double>(out.rows.size());
  return out;
}

MismatchedSummary experiment_mismatched_random(const MismatchedSpec& spec) {
  if (spec.k_list.empty()) fail(ErrorKind::ParameterOutOfRange, "k list is empty");
  for (Eigen::Index k : spec.k_list) {
    if (k < 2 || k % 2 != 0) fail(ErrorKind::ParameterOutOfRange, "k values must be even and positive");
  }
  if (spec.trials < 1 || spec.inits < 1 || spec.d < 1 || spec.k_star < 1) {
    fail(ErrorKind::ParameterOutOfRange, "d, k*, trials and inits must be positive");
  }
  spec.config.validate();

  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<Matrix> truths(trials);
  std::vector<Dataset> train(trials);
  std::vector<Dataset> test(trials);
  parallel_for(trials, [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(spec.seed, t);
    Rng rng(derive_seed(trial_seed, 1));
    truths[t] = gaussian_matrix(rng, spec.d, spec.k_star) / std::sqrt(static_cast<double>(spec.d));
    train[t] = generate_dataset(truths[t], spec.samples, derive_seed(trial_seed, 2));
    test[t] = generate_dataset(truths[t], spec.samples, derive_seed(trial_seed, 3));
  });

  const std::size_t nk = spec.k_list.size();
  const auto inits = static_cast<std::size_t>(spec.inits);
  MismatchedSummary out;
  out.rows.resize(trials * nk * inits);
  parallel_for(out.rows.size(), [&](std::size_t job) {
    const std::size_t t = job / (nk * inits);
    const std::size_t g = (job / inits) % nk;
    const std::size_t i = job % inits;
    const Eigen::Index k = spec.k_list[g];
    const std::uint64_t trial_seed = derive_seed(spec.seed, t);
    const std::uint64_t run_seed = derive_seed(derive_seed(trial_seed, 100 + static_cast<std::uint64_t>(k)), i);
    const PNNWeights init = init_random_pnn(spec.d, k / 2, run_seed);
    TrainConfig cfg = spec.config;
    cfg.seed = derive_seed(run_seed, 4);
    const TrainResult res = sgd_train(train[t], init, cfg, true, &test[t]);

    TrialRow& row = out.rows[job];
    row.experiment = "mismatched_random";
    row.d = spec.d;
    row.k = k;
    row.k_star = spec.k_star;
    row.trial = static_cast<Eigen::Index>(t);
    row.init = static_cast<Eigen::Index>(i);
    row.seed = run_seed;
    row.epochs_run = res.epochs_run;
    row.final_train_loss = res.final_train_loss;
    row.normalized_test_mse = res.final_test_loss_normalized;
    row.population_loss = mismatched_risk(res.pnn(), as_pnn(truths[t])).total;
    row.signature_violations = single_sign_count(res.final_signature);
    row.feasibility_ok = res.line_feasibility_ok;
  });

  for (std::size_t g = 0; g < nk; ++g) {
    std::vector<double> values;
    for (const auto& row : out.rows) {
      if (row.k == spec.k_list[g] && row.feasibility_ok) values.push_back(row.normalized_test_mse);
    }
    MismatchedStats s;
    s.k = spec.k_list[g];
    s.runs = static_cast<Eigen::Index>(values.size());
    if (!values.empty()) {
      s.min = *std::min_element(values.begin(), values.end());
      s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    }
    s.median = median_of(values);
    out.stats.push_back(s);
  }
  return out;
}

}  // namespace pnn
