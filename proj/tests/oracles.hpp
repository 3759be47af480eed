#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library beyond the Matrix/Vector aliases.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "pnn/common.hpp"

namespace oracle {

using pnn::Matrix;
using pnn::Vector;

inline constexpr double kPi = std::numbers::pi;

// Number of eigenvalues of A below sigma, from the signs of an unpivoted
// LDL^T of A - sigma I in long double (Sylvester inertia).
inline int count_below(const Matrix& a, long double sigma) {
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<long double> l(n * n, 0.0L);
  std::vector<long double> d(n, 0.0L);
  int negatives = 0;
  for (std::size_t j = 0; j < n; ++j) {
    long double dj = static_cast<long double>(a(j, j)) - sigma;
    for (std::size_t k = 0; k < j; ++k) dj -= l[j * n + k] * l[j * n + k] * d[k];
    if (dj == 0.0L) dj = -1e-30L;
    d[j] = dj;
    if (dj < 0) ++negatives;
    for (std::size_t i = j + 1; i < n; ++i) {
      long double v = static_cast<long double>(a(i, j));
      for (std::size_t k = 0; k < j; ++k) v -= l[i * n + k] * l[j * n + k] * d[k];
      l[i * n + j] = v / dj;
    }
  }
  return negatives;
}

// k-th smallest eigenvalue (0-based) of a symmetric matrix by bisection.
inline long double eigenvalue_bisect(const Matrix& a, int k) {
  long double bound = 0.0L;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    long double row = 0.0L;
    for (Eigen::Index j = 0; j < a.cols(); ++j) row += std::fabs(static_cast<long double>(a(i, j)));
    bound = std::max(bound, row);
  }
  long double lo = -bound - 1.0L;
  long double hi = bound + 1.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (count_below(a, mid) > k) hi = mid; else lo = mid;
  }
  return 0.5L * (lo + hi);
}

inline double line_angle(const Vector& a, const Vector& b) {
  const Vector ua = a / a.norm();
  const Vector ub = b / b.norm();
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

// E[relu(a^T x) relu(b^T x)] = |a||b| (sin t + (pi - t) cos t) / (2 pi)
inline double relu_kernel(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double t = line_angle(a, b);
  return na * nb * (std::sin(t) + (kPi - t) * std::cos(t)) / (2.0 * kPi);
}

// Population risk as a double sum of relu kernels.
inline double risk_by_kernel(const Matrix& w, const Matrix& ws) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.cols(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) s += relu_kernel(w.col(i), w.col(j));
  for (Eigen::Index i = 0; i < ws.cols(); ++i)
    for (Eigen::Index j = 0; j < ws.cols(); ++j) s += relu_kernel(ws.col(i), ws.col(j));
  for (Eigen::Index i = 0; i < w.cols(); ++i)
    for (Eigen::Index j = 0; j < ws.cols(); ++j) s -= 2.0 * relu_kernel(w.col(i), ws.col(j));
  return s;
}

// E[|u^T x||v^T x|] for unit u, v with cosine rho: (2/pi)(sqrt(1 - rho^2) + rho asin rho).
inline double abs_product_moment(double rho) {
  return (2.0 / kPi) * (std::sqrt(std::max(0.0, 1.0 - rho * rho)) + rho * std::asin(rho));
}

struct MatrixMc {
  Matrix mean;
  Matrix stderr_;
};

// Plain Monte Carlo of E[1{w1^T x > 0, w2^T x > 0} x x^T].
inline MatrixMc mc_truncated_covariance(const Vector& w1, const Vector& w2, std::size_t n, std::uint64_t seed) {
  const auto d = static_cast<std::size_t>(w1.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> s(d * d, 0.0);
  std::vector<double> s2(d * d, 0.0);
  std::vector<double> x(d);
  for (std::size_t t = 0; t < n; ++t) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = normal(rng);
      a += w1(static_cast<Eigen::Index>(i)) * x[i];
      b += w2(static_cast<Eigen::Index>(i)) * x[i];
    }
    if (a > 0.0 && b > 0.0) {
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          const double o = x[i] * x[j];
          s[i * d + j] += o;
          s2[i * d + j] += o * o;
        }
      }
    }
  }
  const double nn = static_cast<double>(n);
  const auto di = static_cast<Eigen::Index>(d);
  MatrixMc out;
  out.mean.resize(di, di);
  out.stderr_.resize(di, di);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double m = s[i * d + j] / nn;
      const double var = (s2[i * d + j] / nn - m * m) * (nn / (nn - 1.0));
      out.mean(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m;
      out.stderr_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::sqrt(std::max(0.0, var) / nn);
    }
  }
  return out;
}

// Kolmogorov-Smirnov statistic of samples against Uniform[a, b].
inline double ks_uniform(std::vector<double> x, double a, double b) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = (x[i] - a) / (b - a);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

inline double central_difference(const std::function<double(double)>& f, double h) {
  return (f(h) - f(-h)) / (2.0 * h);
}

inline double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace oracle
