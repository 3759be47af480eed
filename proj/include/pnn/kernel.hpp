#pragma once

#include "pnn/common.hpp"
#include "pnn/lines.hpp"

namespace pnn {

// psi(x) = x + (2/pi)(sqrt(1 - x^2) - x acos x), the kernel that governs the
// quadratic part of the population risk. Arguments within kDomainSlack of
// [-1, 1] are clamped; anything further out throws DomainError.
double psi(double x);

// Derivative psi'(x) = 1 - (2/pi) acos x.
double psi_derivative(double x);

Matrix psi_apply(const Matrix& m);

// psi-transformed Gram blocks for a training line set and a target line set,
// plus the joint matrix [[LL, cross], [cross^T, star]].
struct KernelBundle {
  Matrix psi_LL;
  Matrix psi_cross;
  Matrix psi_star;
  Matrix joint;
};

KernelBundle make_kernel_bundle(const LineSet& lines, const LineSet& target);

// r lines in the plane with pairwise angles pi|i - j| / r.
LineSet equiangular_2d(Eigen::Index r);

// Symmetric helpers. Inputs are symmetrized as (M + M^T)/2 after checking
// that the asymmetry is within 1e-9 (relative to max(1, |M|_max)).
Matrix symmetrized(const Matrix& m);
double min_eigenvalue(const Matrix& m);
Vector eigenvalues(const Matrix& m);
double spectral_norm(const Matrix& m);

// Moore-Penrose pseudo-inverse of a symmetric matrix via eigendecomposition;
// eigenvalues with |lambda| <= kPinvCutoff * max|lambda| are dropped.
Matrix symmetric_pinv(const Matrix& m);

// General pseudo-inverse through the SVD, same cutoff convention.
Matrix pinv(const Matrix& m);

}  // namespace pnn
