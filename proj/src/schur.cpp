#include "pnn/schur.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pnn {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

}  // namespace

double SchurReport::loss_at_good_local(const Vector& q_star) const { return 0.25 * q_star.dot(schur * q_star); }

SchurReport make_schur_report(Matrix schur) {
  SchurReport out;
  out.schur = symmetrized(schur);
  if (out.schur.size() > 0) {
    const Vector lambda = eigenvalues(out.schur);
    out.spectral_norm = lambda.cwiseAbs().maxCoeff();
    out.min_eigenvalue = lambda.minCoeff();
  }
  return out;
}

SchurReport schur_complement(const KernelBundle& bundle) {
  const Matrix inv = symmetric_pinv(bundle.psi_LL);
  return make_schur_report(bundle.psi_star - bundle.psi_cross.transpose() * inv * bundle.psi_cross);
}

GoodLocalLoss good_local_loss(const SchurReport& report, const Vector& q_star) {
  if (q_star.size() != report.schur.rows()) fail(ErrorKind::DimensionMismatch, "q* does not match the Schur block");
  if (q_star.size() > 0 && q_star.minCoeff() < 0.0) fail(ErrorKind::NegativeMass, "q* must be entrywise non-negative");
  GoodLocalLoss out;
  out.exact = report.loss_at_good_local(q_star);
  out.upper_bound = 0.25 * q_star.squaredNorm() * report.spectral_norm;
  return out;
}

AddLineResult add_line_update(const SchurReport& report, const KernelBundle& bundle, const LineSet& lines,
                              const LineSet& target, const Vector& new_line) {
  if (new_line.size() != lines.dim()) fail(ErrorKind::DimensionMismatch, "new line has wrong dimension");
  if (lines.find_collinear(new_line) >= 0) fail(ErrorKind::DuplicateLine, "new line already in the training set");
  if (!(min_eigenvalue(bundle.psi_LL) > kPdTol)) fail(ErrorKind::SingularKernel, "psi[K_L] is not invertible");

  const Vector u = canonicalize_vector(new_line).unit;
  const Vector psi_z1 = psi_apply((lines.unit_vectors().transpose() * u).cwiseMax(-1.0).cwiseMin(1.0));
  const Vector psi_z2 = psi_apply((target.unit_vectors().transpose() * u).cwiseMax(-1.0).cwiseMin(1.0));
  const Vector solved = bundle.psi_LL.ldlt().solve(psi_z1);
  const double denom = 1.0 - psi_z1.dot(solved);
  if (!(denom > kPdTol)) fail(ErrorKind::SingularKernel, "extended psi[K_L] would be singular");

  AddLineResult out;
  out.alpha = 1.0 / denom;
  out.v = psi_z2 - bundle.psi_cross.transpose() * solved;
  out.report = make_schur_report(report.schur - out.alpha * out.v * out.v.transpose());
  out.lines = lines.with_line(u);
  out.bundle = make_kernel_bundle(out.lines, target);
  return out;
}

NearestLines nearest_line_subset(const LineSet& lines, const LineSet& target) {
  if (lines.size() < target.size()) {
    fail(ErrorKind::ParameterOutOfRange, "need at least as many training lines as target lines");
  }
  const Matrix overlap = cross_gram(lines, target).cwiseAbs();
  std::vector<bool> taken(static_cast<std::size_t>(lines.size()), false);
  NearestLines out;
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    Eigen::Index best = -1;
    Eigen::Index best_any = 0;
    for (Eigen::Index j = 0; j < lines.size(); ++j) {
      if (overlap(j, i) > overlap(best_any, i)) best_any = j;
      if (taken[static_cast<std::size_t>(j)]) continue;
      if (best < 0 || overlap(j, i) > overlap(best, i)) best = j;
    }
    if (best != best_any) out.exclusion_occurred = true;
    taken[static_cast<std::size_t>(best)] = true;
    out.indices.push_back(best);
  }
  out.lines = lines.subset(out.indices);
  return out;
}

AsymptoticReference asymptotic_reference(Eigen::Index d, Eigen::Index r, Eigen::Index r_star) {
  if (d < 1 || r < 1 || r_star < 1) fail(ErrorKind::ParameterOutOfRange, "d, r and r* must be positive");
  const double dd = static_cast<double>(d);
  const double rr = static_cast<double>(r);
  AsymptoticReference out;
  out.limit_kernel = (kTwoOverPi + 1.0 / (std::numbers::pi * dd)) * Matrix::Ones(r, r) +
                     (1.0 - kTwoOverPi) * Matrix::Identity(r, r);
  out.limit = (1.0 + static_cast<double>(r_star) / rr) * (1.0 - kTwoOverPi);
  const double gamma = rr / dd;
  if (r > 1) out.eigenvalues.emplace_back(1.0 - kTwoOverPi, r - 1);
  out.eigenvalues.emplace_back(kTwoOverPi * rr + 1.0 - kTwoOverPi + gamma / std::numbers::pi, 1);
  return out;
}

PerturbationBound perturbation_bound(const LineSet& lines, const LineSet& target, double delta) {
  if (lines.size() != target.size() || lines.dim() != target.dim()) {
    fail(ErrorKind::PreconditionViolated, "perturbation bound needs r = r* in one dimension");
  }
  const auto r = static_cast<double>(lines.size());
  Matrix u = lines.unit_vectors();
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    if (u.col(j).dot(target.line(j)) < 0.0) u.col(j) *= -1.0;
  }
  PerturbationBound out;
  out.frobenius = (u - target.unit_vectors()).norm();
  const double lambda_star = min_eigenvalue(psi_apply(target.gram()));
  if (!(lambda_star >= delta)) {
    std::ostringstream msg;
    msg << "lambda_min(psi[K_L*]) = " << lambda_star << " < delta = " << delta;
    fail(ErrorKind::PreconditionViolated, msg.str());
  }
  const double lhs = 2.0 * std::sqrt(r) * out.frobenius + out.frobenius * out.frobenius;
  if (!(lhs <= delta / 2.0)) {
    std::ostringstream msg;
    msg << "2 sqrt(r)|Z|_F + |Z|_F^2 = " << lhs << " > delta/2 = " << delta / 2.0;
    fail(ErrorKind::PreconditionViolated, msg.str());
  }
  out.bound = (1.0 + 2.0 * r / delta) * out.frobenius * out.frobenius + 4.0 * std::sqrt(r) * out.frobenius;
  out.schur_norm = schur_complement(make_kernel_bundle(lines, target)).spectral_norm;
  out.holds = out.schur_norm <= out.bound + kPdTol;
  return out;
}

double normalized_loss_bound(Eigen::Index r, Eigen::Index r_star) {
  if (r < 1 || r_star < 0) fail(ErrorKind::ParameterOutOfRange, "r must be positive");
  return (1.0 + static_cast<double>(r_star) / static_cast<double>(r)) * (1.0 - kTwoOverPi);
}

BadLocalBound bad_local_asymptotic_bound(double gamma, Eigen::Index r, Eigen::Index r_star, double mu) {
  if (!(gamma > 1.0)) fail(ErrorKind::ParameterOutOfRange, "gamma must exceed 1");
  if (!(mu > 1.0)) fail(ErrorKind::ParameterOutOfRange, "mu must exceed 1");
  if (r < 1 || r_star < 0) fail(ErrorKind::ParameterOutOfRange, "r must be positive");
  const double ratio = static_cast<double>(r_star) / static_cast<double>(r);
  const double spread = 1.0 + std::sqrt(gamma) + mu;
  BadLocalBound out;
  out.coefficient = 0.25 * (1.0 - kTwoOverPi + spread * spread * ratio);
  out.regime_ok = static_cast<double>(r_star) > static_cast<double>(r) / gamma + 1.0;
  return out;
}

std::pair<double, double> structured_inverse(double alpha, double beta, Eigen::Index n) {
  const double nn = static_cast<double>(n);
  if (alpha == 0.0 || alpha + beta * nn == 0.0) {
    fail(ErrorKind::SingularStructure, "alpha I + beta 11^T is singular");
  }
  return {1.0 / alpha, -beta / (alpha * alpha + alpha * beta * nn)};
}

std::vector<SweepRow> schur_sweep(const SweepSpec& spec) {
  if (spec.r_grid.empty()) fail(ErrorKind::ParameterOutOfRange, "r grid is empty");
  if (spec.d < 1 || spec.r_star < 1 || spec.trials < 1) fail(ErrorKind::ParameterOutOfRange, "d, r*, trials must be positive");
  for (Eigen::Index r : spec.r_grid) {
    if (r < 1) fail(ErrorKind::ParameterOutOfRange, "grid entries must be positive");
    if (spec.nearest && r < spec.r_star) fail(ErrorKind::ParameterOutOfRange, "nearest-line sweep needs r >= r*");
  }
  const Eigen::Index r_max = *std::max_element(spec.r_grid.begin(), spec.r_grid.end());
  const std::size_t per_trial = spec.r_grid.size();
  std::vector<SweepRow> rows(per_trial * static_cast<std::size_t>(spec.trials));

  parallel_for(static_cast<std::size_t>(spec.trials), [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(spec.seed, t);
    const LineSet target = random_line_set(spec.d, spec.r_star, derive_seed(trial_seed, 1));
    const LineSet pool = random_line_set(spec.d, r_max, derive_seed(trial_seed, 2));
    for (std::size_t g = 0; g < per_trial; ++g) {
      const auto start = std::chrono::steady_clock::now();
      const Eigen::Index r = spec.r_grid[g];
      std::vector<Eigen::Index> first(static_cast<std::size_t>(r));
      for (Eigen::Index j = 0; j < r; ++j) first[static_cast<std::size_t>(j)] = j;
      LineSet lines = pool.subset(first);
      if (spec.nearest) lines = nearest_line_subset(lines, target).lines;
      const SchurReport rep = schur_complement(make_kernel_bundle(lines, target));
      SweepRow& row = rows[t * per_trial + g];
      row.d = spec.d;
      row.r_star = spec.r_star;
      row.r = r;
      row.trial = static_cast<Eigen::Index>(t);
      row.seed = trial_seed;
      row.spectral_norm = rep.spectral_norm;
      row.min_eig = rep.min_eigenvalue;
      if (spec.timing) {
        row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
    }
  });
  return rows;
}

std::vector<double> sweep_means(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::vector<double> means(spec.r_grid.size(), 0.0);
  std::vector<double> counts(spec.r_grid.size(), 0.0);
  for (const auto& row : rows) {
    for (std::size_t g = 0; g < spec.r_grid.size(); ++g) {
      if (spec.r_grid[g] == row.r) {
        means[g] += row.spectral_norm;
        counts[g] += 1.0;
        break;
      }
    }
  }
  for (std::size_t g = 0; g < means.size(); ++g) means[g] /= std::max(1.0, counts[g]);
  return means;
}

}  // namespace pnn
