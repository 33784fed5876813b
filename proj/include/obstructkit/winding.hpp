#pragma once

// Winding numbers of t ↦ det(t + (1 − t)W) for unitaries W near 1, computed
// by two independent routes (eigenvalue phases and adaptive path sampling)
// that must agree.
//
// Orientation: counterclockwise is positive, the path runs from det(W) at
// t = 0 to 1 at t = 1. Under this convention the clock/shift commutator
// ω·1 has winding −1.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "obstructkit/error.hpp"
#include "obstructkit/matcore.hpp"
#include "obstructkit/quasirep.hpp"
#include "obstructkit/words.hpp"

namespace obstructkit {

struct WindingReport {
  int winding = 0;
  double min_clearance = 0.0;  // min |f(t)| over the samples used
  long samples_used = 0;
  int eigenvalue_method = 0;
  int path_method = 0;
  bool agreement = false;
  double distance_to_identity = 0.0;  // ‖W − 1‖
  double eigenvalue_residue = 0.0;    // |Σ Arg λ / 2π − round|
  /// True when the caller's path was (1 − t) + tW; the reported winding is
  /// still in the t + (1 − t)W orientation.
  bool normalized_from_reversed = false;
};

struct WindingOptions {
  int initial_samples = 64;
  long max_samples = 1L << 20;
  double residue_tol = 1e-6;
  double det_tol = 1e-8;
};

namespace detail {

inline Complex winding_path_value(const ComplexMatrix& w, double t) {
  ComplexMatrix m = (1.0 - t) * w;
  m.diagonal().array() += t;
  return m.partialPivLu().determinant();
}

/// det(t + (1 − t)H) for upper Hessenberg H by pivoted elimination in O(n²).
/// A unitary similarity W = QHQ* leaves the path determinant unchanged.
inline Complex hessenberg_path_value(const ComplexMatrix& h, double t) {
  const Index n = h.rows();
  ComplexMatrix m = (1.0 - t) * h;
  m.diagonal().array() += t;
  Complex det = 1.0;
  for (Index k = 0; k < n; ++k) {
    if (k + 1 < n && std::abs(m(k + 1, k)) > std::abs(m(k, k))) {
      m.row(k).segment(k, n - k).swap(m.row(k + 1).segment(k, n - k));
      det = -det;
    }
    const Complex pivot = m(k, k);
    det *= pivot;
    if (pivot == Complex(0.0)) return 0.0;
    if (k + 1 < n) {
      const Complex f = m(k + 1, k) / pivot;
      if (f != Complex(0.0)) m.row(k + 1).segment(k, n - k) -= f * m.row(k).segment(k, n - k);
    }
  }
  return det;
}

}  // namespace detail

inline WindingReport winding_of_unitary(const ComplexMatrix& w, const Tolerances& tol = default_tolerances(),
                                        const WindingOptions& opt = {}) {
  require_valid(w, "W");
  const Index n = w.rows();
  const double ud = unitarity_defect(w);
  if (ud > tol.unitarity) throw Error(ErrorKind::NotUnitary, "W is not unitary", ud);

  // Both routes start from the Hessenberg form; the Schur factor then gives
  // the eigenvalues. W is normal, so ‖W − 1‖ = max |λ − 1|.
  const ComplexMatrix hess = Eigen::HessenbergDecomposition<ComplexMatrix>(w).matrixH();
  Eigen::ComplexSchur<ComplexMatrix> schur(n);
  schur.computeFromHessenberg(hess, ComplexMatrix(), false);
  if (schur.info() != Eigen::Success) throw Error(ErrorKind::NumericalInconsistency, "eigensolver failed");
  const auto lambda = schur.matrixT().diagonal();

  WindingReport report;
  report.distance_to_identity = (lambda.array() - 1.0).abs().maxCoeff();
  if (report.distance_to_identity >= 1.0) {
    throw Error(ErrorKind::HypothesisViolation, "winding needs ‖W − 1‖ < 1 (equivalently ‖uv − vu‖ < 1)",
                report.distance_to_identity);
  }
  const Complex det = lambda.prod();
  if (std::abs(det - 1.0) > opt.det_tol) {
    throw Error(ErrorKind::OpenPath, "det(W) is not 1, the path is not closed", std::abs(det - 1.0));
  }

  // Route A: eigenvalue phases.
  double phase_sum = 0.0;
  for (Index i = 0; i < n; ++i) phase_sum += std::arg(lambda(i));
  const double turns = phase_sum / (2.0 * std::numbers::pi);
  report.eigenvalue_residue = std::abs(turns - std::round(turns));
  if (report.eigenvalue_residue > opt.residue_tol) {
    throw Error(ErrorKind::OpenPath, "eigenvalue phases do not sum to a multiple of 2π", report.eigenvalue_residue);
  }
  report.eigenvalue_method = -static_cast<int>(std::lround(turns));

  // Route B: adaptive sampling of the determinant path, on the Hessenberg
  // form so each sample is quadratic in n.
  std::vector<std::pair<double, Complex>> pts;
  for (int i = 0; i <= opt.initial_samples; ++i) {
    const double t = static_cast<double>(i) / opt.initial_samples;
    pts.emplace_back(t, detail::hessenberg_path_value(hess, t));
  }
  const double max_jump = std::numbers::pi / 2.0;
  for (;;) {
    std::vector<std::pair<double, Complex>> next;
    next.reserve(pts.size() * 2);
    bool refined = false;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      next.push_back(pts[i]);
      if (std::abs(std::arg(pts[i + 1].second / pts[i].second)) >= max_jump) {
        const double mid = 0.5 * (pts[i].first + pts[i + 1].first);
        next.emplace_back(mid, detail::hessenberg_path_value(hess, mid));
        refined = true;
      }
    }
    next.push_back(pts.back());
    pts = std::move(next);
    if (static_cast<long>(pts.size()) > opt.max_samples) {
      throw Error(ErrorKind::NumericalInconsistency, "path sampling exceeded the sample cap",
                  static_cast<double>(pts.size()));
    }
    if (!refined) break;
  }
  double total = 0.0;
  report.min_clearance = std::abs(pts.front().second);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += std::arg(pts[i + 1].second / pts[i].second);
    report.min_clearance = std::min(report.min_clearance, std::abs(pts[i + 1].second));
  }
  report.samples_used = static_cast<long>(pts.size());
  report.path_method = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));

  report.agreement = report.path_method == report.eigenvalue_method;
  if (!report.agreement || !(report.min_clearance > 0.0)) {
    throw Error(ErrorKind::NumericalInconsistency,
                "eigenvalue route gives " + std::to_string(report.eigenvalue_method) + ", path route gives " +
                    std::to_string(report.path_method));
  }
  report.winding = report.eigenvalue_method;
  return report;
}

/// w(u, v): winding of the commutator u v u* v*.
inline WindingReport winding_pair(const ComplexMatrix& u, const ComplexMatrix& v,
                                  const Tolerances& tol = default_tolerances(), const WindingOptions& opt = {}) {
  require_valid(u, "u");
  require_valid(v, "v");
  require_same_dim(u, v);
  for (const auto* m : {&u, &v}) {
    const double ud = unitarity_defect(*m);
    if (ud > tol.unitarity) throw Error(ErrorKind::NotUnitary, "winding_pair needs unitaries", ud);
  }
  return winding_of_unitary(u * v * u.adjoint() * v.adjoint(), tol, opt);
}

/// ∏ [φ(a_i), φ(b_i)] as matrix group commutators.
inline ComplexMatrix commutator_word_value(const QuasiRep& phi, const CommutatorDecomposition& decomp) {
  const Tolerances& tol = phi.tolerances();
  ComplexMatrix w = identity(phi.dim());
  for (const auto& [a, b] : decomp.pairs) {
    const ComplexMatrix x = phi.evaluate(a);
    const ComplexMatrix y = phi.evaluate(b);
    for (const auto* m : {&x, &y}) {
      const double ud = unitarity_defect(*m);
      if (ud > tol.unitarity) throw Error(ErrorKind::NotUnitary, "winding_class needs unitary values", ud);
    }
    w = w * x * y * x.adjoint() * y.adjoint();
  }
  return w;
}

/// w(φ, c) for the class c written as ∏[a_i, b_i]. The source path is
/// t ↦ det((1 − t) + tW); the report is normalized to the t + (1 − t)W
/// orientation and flags that it was.
inline WindingReport winding_class(const QuasiRep& phi, const CommutatorDecomposition& decomp,
                                   const WindingOptions& opt = {}) {
  if (phi.flavor() != Flavor::Unitary) {
    throw Error(ErrorKind::NotUnitary, "winding_class needs a unitary-flavored quasi-representation");
  }
  const ComplexMatrix w = commutator_word_value(phi, decomp);
  const double dist = op_norm(w - identity(phi.dim()));
  if (dist >= 1.0) {
    throw Error(ErrorKind::HypothesisViolation, "w(φ, c) needs ‖∏[φ(a_i), φ(b_i)] − 1‖ < 1", dist);
  }
  WindingReport report = winding_of_unitary(w, phi.tolerances(), opt);
  report.normalized_from_reversed = true;
  return report;
}

}  // namespace obstructkit
