#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Geometry tolerances shared by every module.
inline constexpr double kZeroTol = 1e-12;
inline constexpr double kCollinearityTol = 1e-9;
inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kDomainSlack = 1e-9;
inline constexpr double kPdTol = 1e-10;
// Singular values below kPinvCutoff * sigma_max are treated as zero.
inline constexpr double kPinvCutoff = 1e-10;

enum class ErrorKind {
  ZeroVector,
  ZeroColumn,
  DuplicateLine,
  DimensionMismatch,
  TooManyCollisions,
  InfeasibleWeights,
  ConfigMismatch,
  DomainError,
  NotSymmetric,
  KernelNotPD,
  SingularProjector,
  SingularKernel,
  SingularStructure,
  NegativeMass,
  PreconditionViolated,
  ParameterOutOfRange,
  CoverageNotReached,
  ConfigError,
  Diverged,
  ParseError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

// Seed derivation: splitmix64 over (seed, stream). Every per-trial or
// per-chunk generator is seeded through this so results do not depend on
// scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

using Rng = std::mt19937_64;

Vector gaussian_vector(Rng& rng, Eigen::Index n);
Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Worker count for parallel_for; 0 means hardware concurrency.
void set_num_threads(unsigned n);
unsigned num_threads();

// Runs body(i) for i in [0, n). Each index is processed exactly once; callers
// write results into per-index slots so reduction order stays fixed.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace pnn
