#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pnn/common.hpp"
#include "pnn/kernel.hpp"
#include "pnn/lines.hpp"

namespace pnn {

// Generalized Schur complement psi[K] / psi[K_L] of a kernel bundle.
struct SchurReport {
  Matrix schur;  // r* x r*, symmetrized
  double spectral_norm = 0.0;
  double min_eigenvalue = 0.0;

  // (1/4) q*^T schur q*
  double loss_at_good_local(const Vector& q_star) const;
};

SchurReport schur_complement(const KernelBundle& bundle);
SchurReport make_schur_report(Matrix schur);

struct GoodLocalLoss {
  double exact = 0.0;        // (1/4) q*^T schur q*
  double upper_bound = 0.0;  // (1/4) |q*|^2 |schur|
};

// Throws NegativeMass if q* has a negative entry.
GoodLocalLoss good_local_loss(const SchurReport& report, const Vector& q_star);

struct AddLineResult {
  LineSet lines;        // old lines with the new one appended
  KernelBundle bundle;  // bundle for the extended line set
  SchurReport report;   // old schur - alpha v v^T
  double alpha = 0.0;
  Vector v;
};

// Rank-one downdate of the Schur complement when one line joins the training
// set. Throws DuplicateLine or SingularKernel.
AddLineResult add_line_update(const SchurReport& report, const KernelBundle& bundle, const LineSet& lines,
                              const LineSet& target, const Vector& new_line);

struct NearestLines {
  LineSet lines;
  std::vector<Eigen::Index> indices;  // chosen index into the training set, per target line
  bool exclusion_occurred = false;    // some target line lost its first choice to an earlier one
};

// For each target line (in order) the training line with the largest
// |<u_j, u*_i>|, skipping lines already taken.
NearestLines nearest_line_subset(const LineSet& lines, const LineSet& target);

struct AsymptoticReference {
  Matrix limit_kernel;  // (2/pi + 1/(pi d)) 11^T + (1 - 2/pi) I
  double limit = 0.0;   // (1 + r*/r)(1 - 2/pi)
  std::vector<std::pair<double, Eigen::Index>> eigenvalues;  // (value, multiplicity)
};

AsymptoticReference asymptotic_reference(Eigen::Index d, Eigen::Index r, Eigen::Index r_star);

struct PerturbationBound {
  double bound = 0.0;  // (1 + 2r/delta)|Z|_F^2 + 4 sqrt(r)|Z|_F
  double schur_norm = 0.0;
  double frobenius = 0.0;  // |Z|_F
  bool holds = false;      // bound >= schur_norm up to roundoff (kPdTol)
};

// lines is a perturbed copy of target (same count). Columns are sign-aligned
// with target before forming Z = U - U*. Throws PreconditionViolated.
PerturbationBound perturbation_bound(const LineSet& lines, const LineSet& target, double delta);

// (1 + r*/r)(1 - 2/pi)
double normalized_loss_bound(Eigen::Index r, Eigen::Index r_star);

struct BadLocalBound {
  double coefficient = 0.0;  // multiplies |q*|^2
  bool regime_ok = false;    // r* > d + 1 with d = r / gamma
};

// (1/4)(1 - 2/pi + (1 + sqrt(gamma) + mu)^2 r*/r). Throws ParameterOutOfRange
// unless gamma > 1 and mu > 1.
BadLocalBound bad_local_asymptotic_bound(double gamma, Eigen::Index r, Eigen::Index r_star, double mu);

// (alpha I + beta 11^T)^{-1} = alpha2 I + beta2 11^T. Throws SingularStructure.
std::pair<double, double> structured_inverse(double alpha, double beta, Eigen::Index n);

struct SweepSpec {
  Eigen::Index d = 15;
  Eigen::Index r_star = 20;
  std::vector<Eigen::Index> r_grid;
  Eigen::Index trials = 20;
  std::uint64_t seed = 0;
  bool nearest = false;
  bool timing = false;  // runtime_ms is 0 unless set, so output stays reproducible
};

struct SweepRow {
  Eigen::Index d = 0;
  Eigen::Index r_star = 0;
  Eigen::Index r = 0;
  Eigen::Index trial = 0;
  std::uint64_t seed = 0;
  double spectral_norm = 0.0;
  double min_eig = 0.0;
  double runtime_ms = 0.0;
};

// Each trial draws the target lines and one nested sequence of training
// lines; the training set for r is the first r lines of that sequence.
std::vector<SweepRow> schur_sweep(const SweepSpec& spec);

// Mean spectral norm per entry of spec.r_grid.
std::vector<double> sweep_means(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace pnn
