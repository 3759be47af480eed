#include "pnn/common.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pnn {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::DuplicateLine: return "DuplicateLine";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooManyCollisions: return "TooManyCollisions";
    case ErrorKind::InfeasibleWeights: return "InfeasibleWeights";
    case ErrorKind::ConfigMismatch: return "ConfigMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::KernelNotPD: return "KernelNotPD";
    case ErrorKind::SingularProjector: return "SingularProjector";
    case ErrorKind::SingularKernel: return "SingularKernel";
    case ErrorKind::SingularStructure: return "SingularStructure";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::CoverageNotReached: return "CoverageNotReached";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector gaussian_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Column-major fill so a column is the same regardless of how many follow.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_num_threads(unsigned n) { g_threads.store(n); }

unsigned num_threads() {
  unsigned n = g_threads.load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(num_threads(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace pnn
