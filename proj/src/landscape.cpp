#include "pnn/landscape.hpp"

#include <cmath>
#include <sstream>

#include "pnn/risk.hpp"

namespace pnn {

namespace {

enum class SignPattern { AllPlus, AllMinus, Mixed };

SignPattern pattern_of(const std::vector<int>& s) {
  bool plus = false;
  bool minus = false;
  for (int v : s) (v > 0 ? plus : minus) = true;
  if (plus && minus) return SignPattern::Mixed;
  return minus ? SignPattern::AllMinus : SignPattern::AllPlus;
}

Matrix sign_diagonal(const std::vector<int>& line_signs, Eigen::Index r) {
  Vector s = Vector::Ones(r);
  if (!line_signs.empty()) {
    if (static_cast<Eigen::Index>(line_signs.size()) != r) {
      fail(ErrorKind::DimensionMismatch, "one sign per line expected");
    }
    for (Eigen::Index l = 0; l < r; ++l) s(l) = line_signs[static_cast<std::size_t>(l)] < 0 ? -1.0 : 1.0;
  }
  return s.asDiagonal();
}

double binomial(Eigen::Index n, Eigen::Index k) {
  return std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                  std::lgamma(static_cast<double>(n - k) + 1));
}

}  // namespace

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::OnlyGlobal: return "OnlyGlobal";
    case RegionLabel::OnlyBadLocal: return "OnlyBadLocal";
    case RegionLabel::NoOptima: return "NoOptima";
    case RegionLabel::MayHaveBadLocal: return "MayHaveBadLocal";
    case RegionLabel::GoodRegion: return "GoodRegion";
  }
  return "Unknown";
}

RegionClassification scalar_region_classify(const std::vector<int>& s, const Vector& w_star) {
  if (s.empty()) fail(ErrorKind::ParameterOutOfRange, "need at least one neuron");
  std::vector<int> s_star(static_cast<std::size_t>(w_star.size()));
  for (Eigen::Index i = 0; i < w_star.size(); ++i) s_star[static_cast<std::size_t>(i)] = w_star(i) < 0.0 ? -1 : 1;
  const SignPattern region = pattern_of(s);
  const SignPattern truth = pattern_of(s_star);

  RegionClassification out;
  if (truth == SignPattern::Mixed) {
    out.label = region == SignPattern::Mixed ? RegionLabel::OnlyGlobal : RegionLabel::OnlyBadLocal;
    out.witness = region == SignPattern::Mixed ? "mixed region, mixed ground truth"
                                               : "single-sign region cannot express mixed ground truth";
  } else if (region == truth) {
    out.label = RegionLabel::OnlyGlobal;
    out.witness = "region matches the single-sign ground truth";
  } else {
    out.label = RegionLabel::NoOptima;
    out.witness = "single-sign ground truth outside this region";
  }
  if (region != SignPattern::Mixed) out.single_sign_lines.push_back(0);
  return out;
}

ScalarHessian scalar_hessian(const std::vector<int>& s) {
  const auto k = static_cast<Eigen::Index>(s.size());
  Vector sv(k);
  for (Eigen::Index i = 0; i < k; ++i) sv(i) = s[static_cast<std::size_t>(i)] < 0 ? -1.0 : 1.0;
  ScalarHessian out;
  out.hessian = 0.5 * Matrix::Ones(k, k) + 0.5 * sv * sv.transpose();
  const Vector lambda = eigenvalues(out.hessian);
  const double cutoff = 1e-10 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  out.rank = (lambda.array().abs() > cutoff).count();
  return out;
}

bool region_condition(const RegionSignature& signature, Eigen::Index d) { return signature.mixed_count() >= d; }

RegionClassification classify_region(const RegionSignature& signature, Eigen::Index d) {
  RegionClassification out;
  for (std::size_t l = 0; l < signature.summary.size(); ++l) {
    if (signature.summary[l] != LineSign::Mixed) out.single_sign_lines.push_back(static_cast<Eigen::Index>(l));
  }
  const Eigen::Index mixed = signature.mixed_count();
  out.label = mixed >= d ? RegionLabel::GoodRegion : RegionLabel::MayHaveBadLocal;
  std::ostringstream w;
  w << mixed << " mixed lines, need " << d;
  out.witness = w.str();
  return out;
}

double good_region_probability(Eigen::Index r, Eigen::Index d, Eigen::Index t) {
  if (r < 1 || d < 1 || t < 1) fail(ErrorKind::ParameterOutOfRange, "r, d and t must be positive");
  const double single = std::pow(2.0, 1.0 - static_cast<double>(t));
  const double mixed = 1.0 - single;
  double bad = 0.0;
  for (Eigen::Index i = 0; i < std::min(d, r + 1); ++i) {
    bad += binomial(r, i) * std::pow(mixed, static_cast<double>(i)) * std::pow(single, static_cast<double>(r - i));
  }
  return 1.0 - bad;
}

OptimumCheck global_optimum_check(const PNNWeights& weights, const PNNWeights& target, double tol) {
  OptimumCheck out;
  out.risk = matched_risk(weights, target).total;
  out.sum_residual = (weights.matrix().rowwise().sum() - target.matrix().rowwise().sum()).norm();
  out.mass_residual = (decompose_weights(weights).q - decompose_weights(target).q).norm();
  out.kernel_min_eigenvalue = min_eigenvalue(psi_apply(weights.lines().gram()));
  out.iff_holds = out.kernel_min_eigenvalue > kPdTol;
  const double scale = std::max(1.0, target.matrix().norm());
  out.optimal = out.sum_residual <= tol * scale && out.mass_residual <= tol * scale;
  return out;
}

Gradient analytic_gradient(const PNNWeights& weights, const Matrix& target) {
  const Matrix& w = weights.matrix();
  if (target.rows() != w.rows()) fail(ErrorKind::DimensionMismatch, "W and W* differ in input dimension");
  Gradient out;
  out.full = Matrix::Zero(w.rows(), w.cols());
  out.projected = Vector::Zero(w.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const Vector wj = w.col(j);
    if (!(wj.norm() > kZeroTol)) {
      fail(ErrorKind::ZeroColumn, "gradient undefined at zero column " + std::to_string(j));
    }
    Vector g = Vector::Zero(w.rows());
    for (Eigen::Index i = 0; i < w.cols(); ++i) {
      if (w.col(i).norm() > kZeroTol) g += truncated_covariance(w.col(i), wj) * w.col(i);
    }
    for (Eigen::Index i = 0; i < target.cols(); ++i) {
      if (target.col(i).norm() > kZeroTol) g -= truncated_covariance(target.col(i), wj) * target.col(i);
    }
    out.full.col(j) = 2.0 * g;
    out.projected(j) = out.full.col(j).dot(weights.lines().line(weights.map().line_of(j)));
  }
  return out;
}

bool stationarity_check(const PNNWeights& weights, const Matrix& target, double tol) {
  return analytic_gradient(weights, target).projected.cwiseAbs().maxCoeff() <= tol;
}

BadRegionStationary bad_region_z(const LineSet& lines, const std::vector<int>& line_signs,
                                 const KernelBundle& kernel, const Vector& q_star, const Vector& w0) {
  const Eigen::Index r = lines.size();
  const Eigen::Index d = lines.dim();
  if (kernel.psi_LL.rows() != r || kernel.psi_cross.cols() != q_star.size() || w0.size() != d) {
    fail(ErrorKind::DimensionMismatch, "kernel, masses and w0 do not fit the line set");
  }
  const Matrix s = sign_diagonal(line_signs, r);
  const Matrix us = lines.unit_vectors() * s;
  const Matrix projector = us * us.transpose();
  const Vector proj_eigs = eigenvalues(projector);
  if (!(proj_eigs.minCoeff() > kPinvCutoff * std::max(proj_eigs.maxCoeff(), 0.0))) {
    fail(ErrorKind::SingularProjector, "U S S^T U^T is rank deficient; lines do not span the input space");
  }
  const Matrix& d11 = kernel.psi_LL;
  const Matrix p_dagger = symmetric_pinv(us.transpose() * us + d11);
  const Vector rhs = d11 * p_dagger * (us.transpose() * w0) +
                     (d11 * p_dagger - Matrix::Identity(r, r)) * (kernel.psi_cross * q_star);
  BadRegionStationary out;
  out.z = -projector.ldlt().solve(us * rhs);
  out.q = p_dagger * (us.transpose() * w0 + kernel.psi_cross * q_star);
  return out;
}

double bad_region_loss(const KernelBundle& kernel, const LineSet& lines, const Vector& q_star,
                       const std::vector<int>& line_signs) {
  const Eigen::Index r = lines.size();
  if (kernel.psi_LL.rows() != r || kernel.psi_star.rows() != q_star.size()) {
    fail(ErrorKind::DimensionMismatch, "kernel and masses do not fit the line set");
  }
  if (!(min_eigenvalue(kernel.psi_LL) > kPdTol)) {
    fail(ErrorKind::SingularKernel, "psi[K_L] is not invertible");
  }
  const Matrix us = lines.unit_vectors() * sign_diagonal(line_signs, r);
  const Matrix augmented = symmetrized(kernel.psi_LL + us.transpose() * us);
  const Matrix schur = kernel.psi_star - kernel.psi_cross.transpose() * augmented.ldlt().solve(kernel.psi_cross);
  return 0.25 * q_star.dot(schur * q_star);
}

}  // namespace pnn
