#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pnn/line_csv.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pnn-experiments");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = pnn::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Everything after the comment header.
std::string body(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    out += line + '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(body(text));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    out.push_back(cells);
  }
  return out;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("header echoes the spec") {
  const Run r = run({"--seed", "7", "asymptotic", "--d", "10", "--r", "20", "--r-star", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# pnn-experiments 0.1.0\n", 0) == 0);
  CHECK(r.out.find("# master_seed: 7\n") != std::string::npos);
  CHECK(r.out.find("# asymptotic.d=10\n") != std::string::npos);
  CHECK(r.out.find("# asymptotic.r-star=5\n") != std::string::npos);
  CHECK(r.out.find("risk.") == std::string::npos);
}

TEST_CASE("risk scalar demo") {
  const Run r = run({"risk", "--matched", "--demo", "scalar"});
  REQUIRE(r.code == 0);
  const auto t = rows(r.out);
  const auto total = column(t[0], "total");
  const auto w = column(t[0], "w");
  const auto ws = column(t[0], "w_star");
  bool saw_zero = false;
  bool saw_16 = false;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i][w] == t[i][ws]) {
      CHECK(std::stod(t[i][total]) == 0.0);
      saw_zero = true;
    }
    if (t[i][w] == "1;1" && t[i][ws] == "6;-4") {
      CHECK(std::stod(t[i][total]) == doctest::Approx(16.0));
      saw_16 = true;
    }
  }
  CHECK(saw_zero);
  CHECK(saw_16);
}

TEST_CASE("risk random demo with Monte Carlo") {
  const Run r = run({"--mc-samples", "200000", "risk", "--demo", "random", "--d", "3", "--r", "2", "--k", "4"});
  REQUIRE(r.code == 0);
  const auto t = rows(r.out);
  const auto total = column(t[0], "total");
  const auto mc = column(t[0], "mc_estimate");
  const auto se = column(t[0], "mc_stderr");
  for (std::size_t i = 1; i < t.size(); ++i) {
    CHECK(std::abs(std::stod(t[i][total]) - std::stod(t[i][mc])) <= 5 * std::stod(t[i][se]) + 1e-12);
  }
}

TEST_CASE("validation errors exit with 2") {
  CHECK(run({"risk", "--mc-samples", "0"}).code == 2);
  CHECK(run({"--mc-samples", "0", "risk"}).code == 2);
  CHECK(run({"risk", "--matched", "--mismatched"}).code == 2);
  CHECK(run({"schur-sweep", "--r", "0"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"train", "matched", "--d", "5", "--k", "7"}).code == 2);
  CHECK(run({"risk", "--lines", "/nonexistent/lines.csv"}).code == 2);
  const Run r = run({"minimax", "bound", "--delta", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("DomainError") != std::string::npos);
}

TEST_CASE("numeric failures exit with 3") {
  CHECK(pnn::cli::exit_code_for(pnn::ErrorKind::SingularKernel) == 3);
  CHECK(pnn::cli::exit_code_for(pnn::ErrorKind::Diverged) == 3);
  CHECK(pnn::cli::exit_code_for(pnn::ErrorKind::ParseError) == 2);
  CHECK(run({"minimax", "net", "--d", "6", "--delta", "0.05", "--max-probes", "2"}).code == 3);
}

TEST_CASE("schur-sweep is reproducible and decreasing") {
  const std::vector<std::string> args{"schur-sweep", "--d", "15", "--r-star", "20", "--r", "25,50,100,200",
                                      "--trials", "4"};
  const Run a = run(args);
  const Run b = run(args);
  REQUIRE(a.code == 0);
  CHECK(body(a.out) == body(b.out));
  const auto t = rows(a.out);
  REQUIRE(t[0] == std::vector<std::string>{"d", "r_star", "r", "trial", "seed", "spectral_norm", "min_eig", "runtime_ms"});
  std::vector<double> sums(4, 0.0);
  const std::vector<std::string> grid{"25", "50", "100", "200"};
  for (std::size_t i = 1; i < t.size(); ++i) {
    for (std::size_t g = 0; g < 4; ++g) {
      if (t[i][2] == grid[g]) sums[g] += std::stod(t[i][5]);
    }
  }
  for (std::size_t g = 1; g < 4; ++g) CHECK(sums[g] < sums[g - 1]);
}

TEST_CASE("schur-sweep asymptotic column") {
  const Run r = run({"schur-sweep", "--d", "32", "--r", "32", "--r-star", "32", "--trials", "1", "--asymptotic"});
  REQUIRE(r.code == 0);
  const auto t = rows(r.out);
  const auto c = column(t[0], "asymptotic_limit");
  CHECK(std::stod(t[1][c]) == doctest::Approx(0.72676).epsilon(1e-5));
}

TEST_CASE("landscape classify") {
  const Run r = run({"landscape", "classify", "--scalar", "--w-star", "6,-4"});
  REQUIRE(r.code == 0);
  const auto t = rows(r.out);
  const auto region = column(t[0], "region");
  const auto label = column(t[0], "label");
  int seen = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const std::string& reg = t[i][region];
    const bool single = reg == "(1;1)" || reg == "(-1;-1)";
    CHECK(t[i][label] == (single ? "OnlyBadLocal" : "OnlyGlobal"));
    ++seen;
  }
  CHECK(seen == 4);
}

TEST_CASE("landscape probability") {
  const Run r = run({"landscape", "probability", "--r", "6", "--d", "3", "--t", "2"});
  REQUIRE(r.code == 0);
  CHECK(body(r.out).find("0.") != std::string::npos);
}

TEST_CASE("minimax bound") {
  const Run r = run({"minimax", "bound", "--d", "4", "--s", "2", "--delta", "0.3", "--k", "8", "--M", "1"});
  REQUIRE(r.code == 0);
  const auto t = rows(r.out);
  REQUIRE(t[0] == std::vector<std::string>{"quantity", "value"});
  bool seen = false;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i][0] != "minimax_risk_bound") continue;
    CHECK(std::stod(t[i][1]) == doctest::Approx(8 * std::sqrt(8 * (1 - std::cos(0.3)))).epsilon(1e-12));
    seen = true;
  }
  CHECK(seen);
}

TEST_CASE("minimax net writes a line-set CSV") {
  const Run r = run({"minimax", "net", "--d", "3", "--delta", "0.4", "--probes", "20000"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const pnn::LineSet net = pnn::read_line_set(in);
  CHECK(net.dim() == 3);
  CHECK(net.size() > 3);
}

TEST_CASE("risk with a line file") {
  const auto path = (std::filesystem::temp_directory_path() / "pnn_cli_lines.csv").string();
  pnn::save_line_set(path, pnn::random_line_set(4, 3, 1));
  const Run r = run({"risk", "--demo", "random", "--d", "4", "--k", "6", "--lines", path});
  const Run wrong = run({"risk", "--demo", "random", "--d", "5", "--k", "6", "--lines", path});
  std::remove(path.c_str());
  CHECK(r.code == 0);
  CHECK(wrong.code == 2);
}

TEST_CASE("train matched table") {
  const Run r = run({"train", "matched", "--d", "5", "--k", "10,50", "--trials", "4", "--epochs", "50"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# summary") != std::string::npos);
  const auto t = rows(r.out);
  CHECK(t[0][0] == "experiment");
  int trials = 0;
  for (const auto& row : t) {
    if (row[0].rfind("matched", 0) == 0) ++trials;
  }
  CHECK(trials == 8);
}

TEST_CASE("train mismatched table goes to a file") {
  const auto path = (std::filesystem::temp_directory_path() / "pnn_cli_train.csv").string();
  const Run r = run({"--out", path, "train", "mismatched", "--d", "4", "--k-star", "3", "--k", "4,8", "--trials",
                     "1", "--inits", "2", "--samples", "300", "--epochs", "5"});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(path.c_str());
  CHECK(ss.str().rfind("# pnn-experiments", 0) == 0);
  int runs = 0;
  for (const auto& row : rows(ss.str())) {
    if (row[0] == "mismatched_random") ++runs;
  }
  CHECK(runs == 4);
  CHECK(r.out.find("median") != std::string::npos);
}

TEST_CASE("installed binary exit codes") {
  const char* exe = std::getenv("PNN_CLI");
  if (exe == nullptr) return;
  const std::string base = std::string("\"") + exe + "\"";
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status(base + " asymptotic --d 4 --r 4 --r-star 2") == 0);
  CHECK(status(base + " risk --mc-samples 0") == 2);
  CHECK(status(base + " minimax net --d 6 --delta 0.05 --max-probes 2") == 3);
  CHECK(status(base + " --version") == 0);
}
