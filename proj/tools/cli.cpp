#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pnn/landscape.hpp"
#include "pnn/line_csv.hpp"
#include "pnn/minimax.hpp"
#include "pnn/risk.hpp"
#include "pnn/schur.hpp"
#include "pnn/trainer.hpp"

namespace pnn::cli {

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out_path;
  unsigned threads = 0;
  std::optional<std::size_t> mc_samples;
};

// Either the caller's stream or a file named by --out.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) fail(ErrorKind::ConfigError, "cannot open " + path + " for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string join_args(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void echo_options(std::ostream& os, const CLI::App& app, const std::string& prefix) {
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "version") continue;
    std::string value = opt->get_default_str();
    if (opt->count() > 0) {
      value.clear();
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    }
    os << "# " << prefix << name << '=' << value << '\n';
  }
  for (const CLI::App* sub : app.get_subcommands()) echo_options(os, *sub, prefix + sub->get_name() + '.');
}

void write_header(std::ostream& os, const CLI::App& app, const std::string& command, const Globals& g) {
  os << "# pnn-experiments " << kVersion << '\n';
  os << "# command: " << command << '\n';
  os << "# master_seed: " << g.seed << '\n';
  echo_options(os, app, "");
}

std::string fmt(double x) { return format_double(x); }

template <typename T>
std::string join(const std::vector<T>& v, char sep = ';') {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s << sep;
    s << v[i];
  }
  return s.str();
}

std::string join_doubles(const Vector& v, char sep = ';') {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += fmt(v(i));
  }
  return s;
}

// ---- risk ------------------------------------------------------------------

struct RiskArgs {
  std::string demo = "random";
  bool matched = false;
  bool mismatched = false;
  Eigen::Index d = 4;
  Eigen::Index r = 3;
  Eigen::Index k = 6;
  Eigen::Index r_star = 2;
  Eigen::Index k_star = 4;
  std::string lines_path;
  bool d_given = false;
};

void risk_row(std::ostream& os, const std::string& name, const Matrix& w, const Matrix& w_star,
              const RiskBreakdown& b, const Globals& g, std::uint64_t stream) {
  os << name << ',' << join_doubles(Eigen::Map<const Vector>(w.data(), w.size())) << ','
     << join_doubles(Eigen::Map<const Vector>(w_star.data(), w_star.size())) << ',' << fmt(b.linear_term) << ','
     << fmt(b.kernel_term) << ',' << fmt(b.total);
  if (g.mc_samples) {
    const McEstimate mc = monte_carlo_risk(w, w_star, *g.mc_samples, derive_seed(g.seed, stream));
    os << ',' << fmt(mc.estimate) << ',' << fmt(mc.standard_error) << ',' << mc.samples;
  }
  os << '\n';
}

NeuronLineMap round_robin(Eigen::Index k, Eigen::Index r) {
  std::vector<Eigen::Index> a(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) a[static_cast<std::size_t>(i)] = i % r;
  return NeuronLineMap(std::move(a), r);
}

void cmd_risk(const RiskArgs& a, const Globals& g, std::ostream& os) {
  os << "instance,w,w_star,linear_term,kernel_term,total";
  if (g.mc_samples) os << ",mc_estimate,mc_stderr,mc_samples";
  os << '\n';

  if (a.demo == "scalar") {
    const std::vector<std::pair<std::vector<double>, std::vector<std::vector<double>>>> cases = {
        {{6, 4}, {{6, 4}, {3, -2}, {1, 1}, {-1, -1}}},
        {{6, -4}, {{6, -4}, {1, 1}, {6, 0}, {-1, -1}}},
    };
    std::uint64_t stream = 0;
    for (const auto& [truth, ws] : cases) {
      const Vector ws_vec = Eigen::Map<const Vector>(truth.data(), static_cast<Eigen::Index>(truth.size()));
      for (const auto& w : ws) {
        const Vector wv = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
        const Matrix wm = wv.transpose();
        const Matrix tm = ws_vec.transpose();
        risk_row(os, "scalar", wm, tm, scalar_risk(wv, ws_vec), g, stream++);
      }
    }
    return;
  }
  if (a.demo != "random") fail(ErrorKind::ConfigError, "unknown demo '" + a.demo + "'");
  if (a.d < 1 || a.r < 1 || a.k < a.r) fail(ErrorKind::ParameterOutOfRange, "need d >= 1 and k >= r >= 1");

  LineSet lines = a.lines_path.empty() ? random_line_set(a.d, a.r, derive_seed(g.seed, 1)) : load_line_set(a.lines_path);
  if (a.d_given && lines.dim() != a.d) {
    fail(ErrorKind::DimensionMismatch, "--d " + std::to_string(a.d) + " but the line file has dim " + std::to_string(lines.dim()));
  }
  const Eigen::Index k = std::max(a.k, lines.size());
  const LineConfigPtr config = make_config(lines, round_robin(k, lines.size()));
  Rng rng(derive_seed(g.seed, 2));
  const PNNWeights w = PNNWeights::from_coordinates(config, gaussian_vector(rng, k));

  if (!a.mismatched) {
    const PNNWeights w_star = PNNWeights::from_coordinates(config, gaussian_vector(rng, k));
    risk_row(os, "matched", w.matrix(), w_star.matrix(), matched_risk(w, w_star), g, 100);
    risk_row(os, "matched_at_truth", w_star.matrix(), w_star.matrix(), matched_risk(w_star, w_star), g, 101);
    return;
  }
  if (a.r_star < 1 || a.k_star < a.r_star) fail(ErrorKind::ParameterOutOfRange, "need k* >= r* >= 1");
  const LineConfigPtr target_config =
      make_config(random_line_set(lines.dim(), a.r_star, derive_seed(g.seed, 3)), round_robin(a.k_star, a.r_star));
  const PNNWeights w_star = PNNWeights::from_coordinates(target_config, gaussian_vector(rng, a.k_star));
  const PNNWeights zero(config, Matrix::Zero(lines.dim(), k));
  risk_row(os, "mismatched", w.matrix(), w_star.matrix(), mismatched_risk(w, w_star), g, 200);
  risk_row(os, "mismatched_zero", zero.matrix(), w_star.matrix(), mismatched_risk(zero, w_star), g, 201);
}

// ---- landscape -------------------------------------------------------------

struct LandscapeArgs {
  bool scalar = false;
  std::vector<double> w_star;
  Eigen::Index r = 10;
  Eigen::Index d = 5;
  Eigen::Index t = 2;
};

void cmd_landscape_classify(const LandscapeArgs& a, std::ostream& os) {
  if (!a.scalar) fail(ErrorKind::ConfigError, "only --scalar classification is tabulated; use 'landscape probability'");
  if (a.w_star.empty()) fail(ErrorKind::ConfigError, "--w-star is required");
  const auto k = static_cast<Eigen::Index>(a.w_star.size());
  if (k > 16) fail(ErrorKind::ParameterOutOfRange, "at most 16 neurons");
  const Vector w_star = Eigen::Map<const Vector>(a.w_star.data(), k);
  os << "region,label,hessian_rank,witness\n";
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<int> s(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = (mask >> (k - 1 - i)) & 1 ? -1 : 1;
    const RegionClassification c = scalar_region_classify(s, w_star);
    os << '(' << join(s) << ")," << to_string(c.label) << ',' << scalar_hessian(s).rank << ",\"" << c.witness
       << "\"\n";
  }
}

void cmd_landscape_probability(const LandscapeArgs& a, std::ostream& os) {
  os << "r,d,t,good_region_probability\n";
  os << a.r << ',' << a.d << ',' << a.t << ',' << fmt(good_region_probability(a.r, a.d, a.t)) << '\n';
}

// ---- schur-sweep / asymptotic ----------------------------------------------

struct SweepArgs {
  Eigen::Index d = 15;
  Eigen::Index r_star = 20;
  std::vector<Eigen::Index> r_grid{25, 50, 100, 200};
  Eigen::Index trials = 20;
  bool nearest = false;
  bool asymptotic = false;
  bool timing = false;
};

void cmd_schur_sweep(const SweepArgs& a, const Globals& g, std::ostream& os) {
  SweepSpec spec;
  spec.d = a.d;
  spec.r_star = a.r_star;
  spec.r_grid = a.r_grid;
  spec.trials = a.trials;
  spec.seed = g.seed;
  spec.nearest = a.nearest;
  spec.timing = a.timing;
  const auto rows = schur_sweep(spec);
  os << "d,r_star,r,trial,seed,spectral_norm,min_eig,runtime_ms";
  if (a.asymptotic) os << ",asymptotic_limit";
  os << '\n';
  for (const auto& row : rows) {
    os << row.d << ',' << row.r_star << ',' << row.r << ',' << row.trial << ',' << row.seed << ','
       << fmt(row.spectral_norm) << ',' << fmt(row.min_eig) << ',' << fmt(row.runtime_ms);
    if (a.asymptotic) os << ',' << fmt(asymptotic_reference(row.d, row.r, row.r_star).limit);
    os << '\n';
  }
}

struct AsymptoticArgs {
  Eigen::Index d = 128;
  Eigen::Index r = 128;
  Eigen::Index r_star = 128;
  std::optional<double> mu;
};

void cmd_asymptotic(const AsymptoticArgs& a, std::ostream& os) {
  const AsymptoticReference ref = asymptotic_reference(a.d, a.r, a.r_star);
  os << "quantity,value,multiplicity\n";
  os << "limit," << fmt(ref.limit) << ",1\n";
  os << "normalized_loss_bound," << fmt(normalized_loss_bound(a.r, a.r_star)) << ",1\n";
  for (const auto& [value, mult] : ref.eigenvalues) os << "limit_kernel_eigenvalue," << fmt(value) << ',' << mult << '\n';
  if (a.mu) {
    const double gamma = static_cast<double>(a.r) / static_cast<double>(a.d);
    const BadLocalBound b = bad_local_asymptotic_bound(gamma, a.r, a.r_star, *a.mu);
    os << "bad_local_coefficient," << fmt(b.coefficient) << ",1\n";
    os << "bad_local_regime_ok," << (b.regime_ok ? 1 : 0) << ",1\n";
  }
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
  Eigen::Index d = 5;
  std::vector<Eigen::Index> k_list{10, 15, 20, 25, 50};
  Eigen::Index k_star = 20;
  Eigen::Index trials = 20;
  Eigen::Index inits = 5;
  Eigen::Index samples = 2000;
  TrainConfig config;
  double loss_tol = 1e-4;
  double grad_tol = 1e-2;
};

void add_train_options(CLI::App* sub, TrainArgs& a) {
  sub->add_option("--d", a.d, "input dimension")->capture_default_str();
  sub->add_option("--k", a.k_list, "hidden-neuron counts")->delimiter(',')->capture_default_str();
  sub->add_option("--trials", a.trials, "trials per k")->capture_default_str();
  sub->add_option("--samples", a.samples, "samples per data fold")->capture_default_str();
  sub->add_option("--epochs", a.config.epochs)->capture_default_str();
  sub->add_option("--batch", a.config.batch_size)->capture_default_str();
  sub->add_option("--lr", a.config.learning_rate)->capture_default_str();
  sub->add_option("--momentum", a.config.momentum)->capture_default_str();
  sub->add_option("--decay-rate", a.config.decay_rate)->capture_default_str();
  sub->add_option("--decay-every", a.config.decay_every_steps, "mini-batch steps between decays")->capture_default_str();
  sub->add_option("--window", a.config.early_stop_window, "early-stop window in epochs, 0 disables")->capture_default_str();
  sub->add_option("--threshold", a.config.early_stop_threshold, "early-stop loss threshold")->capture_default_str();
}

const char* kTrialColumns =
    "experiment,d,k,k_star,trial,init,seed,epochs_run,final_train_loss,normalized_test_mse,population_loss,"
    "weight_gap,outcome,signature_violations,feasibility_ok\n";

void trial_row(std::ostream& os, const TrialRow& r) {
  os << r.experiment << ',' << r.d << ',' << r.k << ',' << r.k_star << ',' << r.trial << ',' << r.init << ','
     << r.seed << ',' << r.epochs_run << ',' << fmt(r.final_train_loss) << ',' << fmt(r.normalized_test_mse) << ','
     << fmt(r.population_loss) << ',' << fmt(r.weight_gap) << ',' << to_string(r.outcome) << ','
     << r.signature_violations << ',' << (r.feasibility_ok ? 1 : 0) << '\n';
}

void cmd_train_matched(const TrainArgs& a, const Globals& g, std::ostream& os, std::ostream& summary) {
  os << kTrialColumns;
  std::ostringstream table;
  table << "k,trials,fraction_global,badlocal_with_single_sign_line,badlocal\n";
  for (Eigen::Index k : a.k_list) {
    MatchedSpec spec;
    spec.d = a.d;
    spec.k = k;
    spec.trials = a.trials;
    spec.samples = a.samples;
    spec.config = a.config;
    spec.seed = derive_seed(g.seed, static_cast<std::uint64_t>(k));
    spec.loss_tol = a.loss_tol;
    spec.grad_tol = a.grad_tol;
    const MatchedSummary s = experiment_matched_degree_one(spec);
    Eigen::Index bad = 0;
    Eigen::Index bad_single = 0;
    for (const auto& row : s.rows) {
      trial_row(os, row);
      if (row.outcome == Outcome::BadLocal) {
        ++bad;
        if (row.signature_violations > 0) ++bad_single;
      }
    }
    table << k << ',' << a.trials << ',' << fmt(s.fraction_global) << ',' << bad_single << ',' << bad << '\n';
  }
  summary << "# summary\n" << table.str();
}

void cmd_train_mismatched(const TrainArgs& a, const Globals& g, std::ostream& os, std::ostream& summary) {
  MismatchedSpec spec;
  spec.d = a.d;
  spec.k_star = a.k_star;
  spec.k_list = a.k_list;
  spec.trials = a.trials;
  spec.inits = a.inits;
  spec.samples = a.samples;
  spec.config = a.config;
  spec.seed = g.seed;
  const MismatchedSummary s = experiment_mismatched_random(spec);
  os << kTrialColumns;
  for (const auto& row : s.rows) trial_row(os, row);
  summary << "# summary\nk,runs,min_normalized_mse,mean_normalized_mse,median_normalized_mse\n";
  for (const auto& st : s.stats) {
    summary << st.k << ',' << st.runs << ',' << fmt(st.min) << ',' << fmt(st.mean) << ',' << fmt(st.median) << '\n';
  }
}

// ---- minimax ---------------------------------------------------------------

struct MinimaxArgs {
  Eigen::Index d = 3;
  Eigen::Index s = 1;
  double delta = 0.3;
  Eigen::Index k = 8;
  double m = 1.0;
  std::size_t max_probes = 10000;
  std::size_t probes = 100000;
};

void cmd_minimax_bound(const MinimaxArgs& a, std::ostream& os) {
  os << "quantity,value\n";
  os << "net_size_bound," << fmt(net_size_bound(a.d, a.delta)) << '\n';
  os << "sparse_net_size," << fmt(sparse_net_size(a.d, a.s, a.delta)) << '\n';
  os << "sparse_net_size_known_patterns," << fmt(sparse_net_size(a.d, a.s, a.delta, a.k)) << '\n';
  os << "minimax_risk_bound," << fmt(minimax_risk_bound(a.k, a.m, a.d, a.delta)) << '\n';
}

void cmd_minimax_net(const MinimaxArgs& a, const Globals& g, std::ostream& os) {
  const AngularNet net = greedy_angular_net(a.d, a.delta, g.seed, a.max_probes);
  const double gap = coverage_gap(net, a.probes, derive_seed(g.seed, 1));
  os << "# net_size: " << net.size() << '\n';
  os << "# net_size_bound: " << fmt(net_size_bound(a.d, a.delta)) << '\n';
  os << "# coverage_gap: " << fmt(gap) << " over " << a.probes << " probes\n";
  write_line_set(os, LineSet::from_units(net.vectors));
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularProjector:
    case ErrorKind::SingularKernel:
    case ErrorKind::SingularStructure:
    case ErrorKind::KernelNotPD:
    case ErrorKind::NotSymmetric:
    case ErrorKind::Diverged:
    case ErrorKind::CoverageNotReached:
    case ErrorKind::TooManyCollisions:
      return kNumeric;
    default:
      return kValidation;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Porcupine neural network experiments", "pnn-experiments"};
  app.set_version_flag("--version", std::string("pnn-experiments ") + kVersion);
  app.require_subcommand(1);

  Globals g;
  std::size_t mc_samples = 0;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--out", g.out_path, "output CSV path (default stdout)");
  app.add_option("--threads", g.threads, "worker threads, 0 = all cores")->capture_default_str();
  auto* mc_opt = app.add_option("--mc-samples", mc_samples, "Monte Carlo samples for risk estimates");

  RiskArgs risk;
  auto* risk_cmd = app.add_subcommand("risk", "closed-form risk breakdown with optional Monte Carlo check");
  risk_cmd->add_option("--demo", risk.demo, "scalar | random")->capture_default_str();
  risk_cmd->add_flag("--matched", risk.matched, "matched line configuration (default)");
  risk_cmd->add_flag("--mismatched", risk.mismatched, "random target lines");
  auto* risk_d = risk_cmd->add_option("--d", risk.d)->capture_default_str();
  risk_cmd->add_option("--r", risk.r)->capture_default_str();
  risk_cmd->add_option("--k", risk.k)->capture_default_str();
  risk_cmd->add_option("--r-star", risk.r_star)->capture_default_str();
  risk_cmd->add_option("--k-star", risk.k_star)->capture_default_str();
  risk_cmd->add_option("--lines", risk.lines_path, "training line set CSV");

  LandscapeArgs land;
  auto* land_cmd = app.add_subcommand("landscape", "region classification");
  land_cmd->require_subcommand(1);
  auto* classify_cmd = land_cmd->add_subcommand("classify", "scalar region table");
  classify_cmd->add_flag("--scalar", land.scalar, "scalar network");
  classify_cmd->add_option("--w-star", land.w_star, "ground-truth weights")->delimiter(',');
  auto* prob_cmd = land_cmd->add_subcommand("probability", "chance that random signs give a good region");
  prob_cmd->add_option("--r", land.r)->capture_default_str();
  prob_cmd->add_option("--d", land.d)->capture_default_str();
  prob_cmd->add_option("--t", land.t, "neurons per line")->capture_default_str();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("schur-sweep", "spectral norm of the Schur complement over r");
  sweep_cmd->add_option("--d", sweep.d)->capture_default_str();
  sweep_cmd->add_option("--r-star", sweep.r_star)->capture_default_str();
  sweep_cmd->add_option("--r", sweep.r_grid, "training line counts")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--trials", sweep.trials)->capture_default_str();
  sweep_cmd->add_flag("--nearest", sweep.nearest, "use the nearest-line subset");
  sweep_cmd->add_flag("--asymptotic", sweep.asymptotic, "add the high-dimensional limit column");
  sweep_cmd->add_flag("--timing", sweep.timing, "record runtime_ms (breaks byte-identical output)");

  AsymptoticArgs asym;
  auto* asym_cmd = app.add_subcommand("asymptotic", "high-dimensional reference values");
  asym_cmd->add_option("--d", asym.d)->capture_default_str();
  asym_cmd->add_option("--r", asym.r)->capture_default_str();
  asym_cmd->add_option("--r-star", asym.r_star)->capture_default_str();
  asym_cmd->add_option("--mu", asym.mu, "concentration slack for the bad-local bound");

  TrainArgs matched;
  matched.config = matched_defaults();
  TrainArgs mismatched;
  mismatched.config = mismatched_defaults();
  mismatched.d = 15;
  mismatched.k_list = {10, 20, 40, 80};
  mismatched.trials = 10;
  mismatched.samples = 4000;
  auto* train_cmd = app.add_subcommand("train", "SGD experiments");
  train_cmd->require_subcommand(1);
  auto* matched_cmd = train_cmd->add_subcommand("matched", "degree-one matched runs");
  add_train_options(matched_cmd, matched);
  matched_cmd->add_option("--loss-tol", matched.loss_tol, "population loss counted as global")->capture_default_str();
  matched_cmd->add_option("--grad-tol", matched.grad_tol, "projected-gradient stationarity tolerance")->capture_default_str();
  auto* mismatched_cmd = train_cmd->add_subcommand("mismatched", "random PNNs against an unconstrained network");
  add_train_options(mismatched_cmd, mismatched);
  mismatched_cmd->add_option("--k-star", mismatched.k_star)->capture_default_str();
  mismatched_cmd->add_option("--inits", mismatched.inits, "initializations per trial and k")->capture_default_str();

  MinimaxArgs mm;
  auto* mm_cmd = app.add_subcommand("minimax", "angular nets and minimax bounds");
  mm_cmd->require_subcommand(1);
  auto* bound_cmd = mm_cmd->add_subcommand("bound", "evaluate net-size and minimax bounds");
  bound_cmd->add_option("--d", mm.d)->capture_default_str();
  bound_cmd->add_option("--s", mm.s, "sparsity")->capture_default_str();
  bound_cmd->add_option("--delta", mm.delta)->capture_default_str();
  bound_cmd->add_option("--k", mm.k)->capture_default_str();
  bound_cmd->add_option("--M", mm.m, "weight-norm bound")->capture_default_str();
  auto* net_cmd = mm_cmd->add_subcommand("net", "greedy angular net in line-set CSV form");
  net_cmd->add_option("--d", mm.d)->capture_default_str();
  net_cmd->add_option("--delta", mm.delta)->capture_default_str();
  net_cmd->add_option("--max-probes", mm.max_probes, "consecutive covered probes to stop")->capture_default_str();
  net_cmd->add_option("--probes", mm.probes, "probes for the coverage check")->capture_default_str();

  for (auto* sub : {risk_cmd, land_cmd, classify_cmd, prob_cmd, sweep_cmd, asym_cmd, train_cmd, matched_cmd,
                    mismatched_cmd, mm_cmd, bound_cmd, net_cmd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (mc_opt->count() > 0) {
      if (mc_samples < 1) fail(ErrorKind::ParameterOutOfRange, "--mc-samples must be at least 1");
      g.mc_samples = mc_samples;
    }
    set_num_threads(g.threads);
    Sink sink(g.out_path, out);
    std::ostream& os = *sink;
    const std::string command = join_args(argc, argv);
    write_header(os, app, command, g);

    if (risk_cmd->parsed()) {
      if (risk.matched && risk.mismatched) fail(ErrorKind::ConfigError, "--matched and --mismatched are exclusive");
      risk.d_given = risk_d->count() > 0;
      cmd_risk(risk, g, os);
    } else if (classify_cmd->parsed()) {
      cmd_landscape_classify(land, os);
    } else if (prob_cmd->parsed()) {
      cmd_landscape_probability(land, os);
    } else if (sweep_cmd->parsed()) {
      cmd_schur_sweep(sweep, g, os);
    } else if (asym_cmd->parsed()) {
      cmd_asymptotic(asym, os);
    } else if (matched_cmd->parsed()) {
      cmd_train_matched(matched, g, os, sink.to_file() ? out : os);
    } else if (mismatched_cmd->parsed()) {
      cmd_train_mismatched(mismatched, g, os, sink.to_file() ? out : os);
    } else if (bound_cmd->parsed()) {
      cmd_minimax_bound(mm, os);
    } else if (net_cmd->parsed()) {
      cmd_minimax_net(mm, g, os);
    }
    os.flush();
    if (!os) fail(ErrorKind::ConfigError, "failed writing output");
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}

}  // namespace pnn::cli
