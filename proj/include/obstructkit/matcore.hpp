#pragma once

// Dense complex linear algebra shared by every other module: operator norm,
// polar decomposition, Hermitian functional calculus, block sums.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "obstructkit/error.hpp"

namespace obstructkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical tolerances. `spectral` scales with the matrix dimension.
struct Tolerances {
  double spectral_per_dim = 1e-10;
  double singularity = 1e-12;
  double unitarity = 1e-8;

  double spectral(Index dim) const { return spectral_per_dim * static_cast<double>(std::max<Index>(dim, 1)); }
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

inline void require_valid(const ComplexMatrix& a, const char* what = "matrix") {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::InvalidMatrix, std::string(what) + " must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::InvalidMatrix, std::string(what) + " has non-finite entries");
  }
}

inline void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::InvalidSize, "dimension mismatch: " + std::to_string(a.rows()) + " vs " +
                                            std::to_string(b.rows()));
  }
}

inline ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

/// Singular values in decreasing order.
inline RealVector singular_values(const ComplexMatrix& a) {
  if (!a.allFinite()) throw Error(ErrorKind::InvalidMatrix, "non-finite entries");
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues();
}

/// Largest singular value, as the square root of the top eigenvalue of the
/// smaller Gram matrix. Deterministic, unlike power iteration, and far
/// cheaper than a full SVD at a few hundred dimensions.
inline double op_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (!a.allFinite()) throw Error(ErrorKind::InvalidMatrix, "non-finite entries");
  const ComplexMatrix g = a.rows() <= a.cols() ? ComplexMatrix(a * a.adjoint()) : ComplexMatrix(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

inline double min_singular_value(const ComplexMatrix& a) {
  const RealVector s = singular_values(a);
  return s(s.size() - 1);
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

/// Norm of a Hermitian matrix as its largest |eigenvalue|. The input is
/// symmetrized first to absorb rounding in how it was formed.
inline double hermitian_norm(const ComplexMatrix& h) {
  if (h.size() == 0) return 0.0;
  if (!h.allFinite()) throw Error(ErrorKind::InvalidMatrix, "non-finite entries");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((h + h.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// max(‖a*a − 1‖, ‖aa* − 1‖). For square a the two agree, since a*a and aa*
/// are unitarily similar, so one side suffices.
inline double unitarity_defect(const ComplexMatrix& a) {
  if (a.rows() == a.cols()) return hermitian_norm(a.adjoint() * a - identity(a.rows()));
  return std::max(op_norm(a.adjoint() * a - identity(a.cols())), op_norm(a * a.adjoint() - identity(a.rows())));
}

inline bool is_unitary(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && unitarity_defect(a) <= tol;
}

/// max(‖p² − p‖, ‖p − p*‖)
inline double projection_defect(const ComplexMatrix& p) {
  return std::max(op_norm(p * p - p), op_norm(p - p.adjoint()));
}

struct HermitianSpectrum {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // unitary, columns match eigenvalues

  ComplexMatrix apply(const std::function<double(double)>& f) const {
    RealVector fv = eigenvalues.unaryExpr(f);
    return eigenvectors * fv.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized when
/// its anti-Hermitian part is below the spectral tolerance; larger asymmetry
/// is rejected.
inline HermitianSpectrum hermitian_spectrum(const ComplexMatrix& a,
                                            const Tolerances& tol = default_tolerances()) {
  require_valid(a);
  const double asym = op_norm(a - a.adjoint());
  if (asym > tol.spectral(a.rows())) {
    throw Error(ErrorKind::InvalidMatrix, "matrix is not Hermitian", asym);
  }
  const ComplexMatrix sym = (a + a.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalInconsistency, "Hermitian eigensolver failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

/// χ_(cut,∞)(a) for Hermitian a whose spectrum stays gap_tol away from cut.
inline ComplexMatrix spectral_projection(const ComplexMatrix& a, double cut, double gap_tol,
                                         const Tolerances& tol = default_tolerances()) {
  const HermitianSpectrum spec = hermitian_spectrum(a, tol);
  for (Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const double lambda = spec.eigenvalues(i);
    if (std::abs(lambda - cut) < gap_tol) {
      throw Error(ErrorKind::SpectralGapViolation,
                  "eigenvalue " + std::to_string(lambda) + " within " + std::to_string(gap_tol) + " of cut " +
                      std::to_string(cut),
                  lambda, static_cast<std::size_t>(i));
    }
  }
  ComplexMatrix p = spec.apply([cut](double x) { return x > cut ? 1.0 : 0.0; });
  return (p + p.adjoint()) * 0.5;
}

/// Smallest distance from the spectrum of Hermitian a to `cut`.
inline double spectral_gap(const ComplexMatrix& a, double cut, const Tolerances& tol = default_tolerances()) {
  const HermitianSpectrum spec = hermitian_spectrum(a, tol);
  return (spec.eigenvalues.array() - cut).abs().minCoeff();
}

/// Number of eigenvalues of Hermitian a above `cut`.
inline Index count_above(const ComplexMatrix& a, double cut, const Tolerances& tol = default_tolerances()) {
  const HermitianSpectrum spec = hermitian_spectrum(a, tol);
  return (spec.eigenvalues.array() > cut).count();
}

/// Unitary factor u of a = u·(a*a)^{1/2}.
inline ComplexMatrix polar_unitary(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
  require_valid(a);
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= tol.singularity) {
    throw Error(ErrorKind::NotInvertible, "smallest singular value below singularity tolerance", smin);
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// (a*a)^{-1/2} for invertible a.
inline ComplexMatrix inverse_abs(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
  const HermitianSpectrum spec = hermitian_spectrum(a.adjoint() * a, tol);
  const double lo = spec.eigenvalues(0);
  if (lo <= tol.singularity * tol.singularity) {
    throw Error(ErrorKind::NotInvertible, "a*a is singular", lo);
  }
  return spec.apply([](double x) { return 1.0 / std::sqrt(x); });
}

/// a ⊕ b
inline ComplexMatrix block_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.allFinite() || !b.allFinite()) throw Error(ErrorKind::InvalidMatrix, "non-finite entries");
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// Kronecker product a ⊗ b, with a's index as the slow one.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// exp(i·t·h) for Hermitian h.
inline ComplexMatrix exp_i_hermitian(const ComplexMatrix& h, double t,
                                     const Tolerances& tol = default_tolerances()) {
  const HermitianSpectrum spec = hermitian_spectrum(h, tol);
  RealVector phases = spec.eigenvalues * t;
  Eigen::VectorXcd d(phases.size());
  for (Index i = 0; i < phases.size(); ++i) d(i) = std::polar(1.0, phases(i));
  return spec.eigenvectors * d.asDiagonal() * spec.eigenvectors.adjoint();
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && op_norm(a - b) <= tol;
}

}  // namespace obstructkit
