#pragma once

// Independent reference computations used only by the tests. They avoid the
// library code paths they check: no SVD for norms, no eigen-decomposition for
// windings, no Smith form for homology.

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Operator norm by power iteration on a*a.
inline double power_norm(const Matrix& a, int iters = 2000) {
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(a.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += Complex(0.01 * i, -0.003 * i * i);
  x.normalize();
  double lambda = 0.0;
  for (int k = 0; k < iters; ++k) {
    Eigen::VectorXcd y = a.adjoint() * (a * x);
    const double n = y.norm();
    if (n == 0.0) return 0.0;
    lambda = n;
    x = y / n;
  }
  return std::sqrt(lambda);
}

/// Winding of t ↦ det(t + (1 − t)W) around 0 by dense uniform sampling.
inline int sampled_winding(const Matrix& w, int samples = 20000) {
  const Eigen::Index n = w.rows();
  const Matrix one = Matrix::Identity(n, n);
  double total = 0.0;
  Complex prev = w.determinant();
  for (int i = 1; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const Complex cur = (t * one + (1.0 - t) * w).determinant();
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace oracle
