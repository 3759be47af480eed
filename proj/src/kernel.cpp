#include "pnn/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pnn {

namespace {

double clamp_argument(double x) {
  if (!(std::abs(x) <= 1.0 + kDomainSlack)) {
    std::ostringstream msg;
    msg << "kernel argument " << x << " is outside [-1, 1]";
    fail(ErrorKind::DomainError, msg.str());
  }
  return std::clamp(x, -1.0, 1.0);
}

}  // namespace

double psi(double x) {
  x = clamp_argument(x);
  return x + (2.0 / std::numbers::pi) * (std::sqrt(1.0 - x * x) - x * std::acos(x));
}

double psi_derivative(double x) {
  x = clamp_argument(x);
  return 1.0 - (2.0 / std::numbers::pi) * std::acos(x);
}

Matrix psi_apply(const Matrix& m) { return m.unaryExpr([](double x) { return psi(x); }); }

KernelBundle make_kernel_bundle(const LineSet& lines, const LineSet& target) {
  KernelBundle b;
  b.psi_LL = psi_apply(lines.gram());
  b.psi_cross = psi_apply(cross_gram(lines, target));
  b.psi_star = psi_apply(target.gram());
  const Eigen::Index r = lines.size();
  const Eigen::Index rs = target.size();
  b.joint.resize(r + rs, r + rs);
  b.joint.topLeftCorner(r, r) = b.psi_LL;
  b.joint.topRightCorner(r, rs) = b.psi_cross;
  b.joint.bottomLeftCorner(rs, r) = b.psi_cross.transpose();
  b.joint.bottomRightCorner(rs, rs) = b.psi_star;
  return b;
}

LineSet equiangular_2d(Eigen::Index r) {
  if (r < 2) fail(ErrorKind::ParameterOutOfRange, "equiangular_2d needs r >= 2");
  Matrix units(2, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double angle = std::numbers::pi * static_cast<double>(i) / static_cast<double>(r);
    units(0, i) = std::cos(angle);
    units(1, i) = std::sin(angle);
  }
  return LineSet::from_vectors(units);
}

Matrix symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::NotSymmetric, "matrix is not square");
  if (m.size() == 0) return m;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "asymmetry " << asym << " exceeds tolerance";
    fail(ErrorKind::NotSymmetric, msg.str());
  }
  return 0.5 * (m + m.transpose());
}

Vector eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const Matrix& m) { return eigenvalues(m).minCoeff(); }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return eigenvalues(m).cwiseAbs().maxCoeff();
}

Matrix symmetric_pinv(const Matrix& m) {
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m));
  const Vector& lambda = solver.eigenvalues();
  const double cutoff = kPinvCutoff * lambda.cwiseAbs().maxCoeff();
  Vector inv(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    inv(i) = std::abs(lambda(i)) > cutoff ? 1.0 / lambda(i) : 0.0;
  }
  const Matrix& v = solver.eigenvectors();
  Matrix out = v * inv.asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix pinv(const Matrix& m) {
  if (m.size() == 0) return m.transpose();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = kPinvCutoff * sigma(0);
  Vector inv(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) inv(i) = sigma(i) > cutoff ? 1.0 / sigma(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace pnn
