#pragma once

// Almost-commuting projections: connecting unitaries with commutator
// control, chained conjugation along a subdivided path, the finite
// dimensional K-pairing ⟨p, q⟩ and a compatibility sampler.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "obstructkit/error.hpp"
#include "obstructkit/matcore.hpp"
#include "obstructkit/quasirep.hpp"
#include "obstructkit/words.hpp"

namespace obstructkit {

struct ProjectionPairContext {
  ComplexMatrix p;
  ComplexMatrix q;
  std::vector<ComplexMatrix> x;
  double eps = 0.0;  // max_x max(‖[p,x]‖, ‖[q,x]‖)

  ProjectionPairContext(ComplexMatrix p_in, ComplexMatrix q_in, std::vector<ComplexMatrix> x_in,
                        const Tolerances& tol = default_tolerances())
      : p(std::move(p_in)), q(std::move(q_in)), x(std::move(x_in)) {
    require_valid(p, "p");
    require_valid(q, "q");
    require_same_dim(p, q);
    for (const auto* m : {&p, &q}) {
      const double pd = projection_defect(*m);
      if (pd > tol.spectral(m->rows())) throw Error(ErrorKind::NotProjection, "not a projection", pd);
    }
    for (const auto& xi : x) {
      require_valid(xi, "test operator");
      require_same_dim(p, xi);
      eps = std::max({eps, op_norm(commutator(p, xi)), op_norm(commutator(q, xi))});
    }
  }
};

struct ConjugationAudit {
  double conjugation_error = 0.0;  // ‖u p u* − q‖
  std::vector<double> commutators; // ‖[u, x]‖ per test operator
  double bound = 0.0;              // constant · eps
  double worst_ratio = 0.0;        // max ‖[u,x]‖ / bound
  bool passed = true;
};

struct ConnectingUnitary {
  ComplexMatrix u;
  ConjugationAudit audit;
};

/// With v = pq + (1 − p)(1 − q) one has vq = pv, so v(v*v)^{−1/2} carries q
/// to p. Its adjoint, v*(vv*)^{−1/2}, is returned: u p u* = q, and
/// ‖[u, x]‖ ≤ 28 ε when ‖p − q‖ < 1/4 (the estimate is symmetric in p, q).
inline ConnectingUnitary connecting_unitary(const ProjectionPairContext& ctx, const Tolerances& tol = default_tolerances(),
                                            double slack = 1e-9, double bound_scale = 1.0) {
  const Index n = ctx.p.rows();
  const double gap = op_norm(ctx.p - ctx.q);
  if (gap >= 0.25) throw Error(ErrorKind::HypothesisViolation, "connecting unitary needs ‖p − q‖ < 1/4", gap);
  const ComplexMatrix one = identity(n);
  const ComplexMatrix v = ctx.p * ctx.q + (one - ctx.p) * (one - ctx.q);
  const ComplexMatrix vs = v.adjoint();
  ConnectingUnitary out;
  out.u = vs * inverse_abs(vs, tol);
  auto& a = out.audit;
  a.conjugation_error = op_norm(out.u * ctx.p * out.u.adjoint() - ctx.q);
  a.bound = bound_scale * 28.0 * ctx.eps;
  a.passed = a.conjugation_error <= 1e-9;
  for (const auto& x : ctx.x) {
    const double c = op_norm(commutator(out.u, x));
    a.commutators.push_back(c);
    a.passed = a.passed && c <= a.bound + slack;
    a.worst_ratio = std::max(a.worst_ratio, a.bound > 0.0 ? c / a.bound : (c > slack ? INFINITY : 0.0));
  }
  return out;
}

struct ChainConjugation {
  ComplexMatrix u;
  double eps_path = 0.0;          // max_i max_x ‖[p_i, x]‖
  std::size_t steps = 0;
  double endpoint_error = 0.0;    // ‖u p_0 u* − p_m‖
  ConjugationAudit audit;         // bound = 28 · eps_path · steps
};

/// Product u_{m−1}⋯u_0 of connecting unitaries along p_0, …, p_m.
inline ChainConjugation chain_conjugation(const std::vector<ComplexMatrix>& path, const std::vector<ComplexMatrix>& x,
                                          const Tolerances& tol = default_tolerances(), double bound_scale = 1.0) {
  if (path.empty()) throw Error(ErrorKind::InvalidSize, "empty projection path");
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    require_same_dim(path[i], path[i + 1]);
    const double gap = op_norm(path[i] - path[i + 1]);
    if (gap >= 0.25) throw Error(ErrorKind::SubdivisionTooCoarse, "consecutive projections too far apart", gap, i);
  }
  ChainConjugation out;
  out.steps = path.size() - 1;
  const Index n = path.front().rows();
  out.u = identity(n);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    ProjectionPairContext ctx(path[i], path[i + 1], x, tol);
    out.eps_path = std::max(out.eps_path, ctx.eps);
    out.u = connecting_unitary(ctx, tol).u * out.u;
  }
  if (out.steps == 0) {
    ProjectionPairContext ctx(path[0], path[0], x, tol);
    out.eps_path = ctx.eps;
  }
  const double m = static_cast<double>(out.steps);
  out.endpoint_error = op_norm(out.u * path.front() * out.u.adjoint() - path.back());
  auto& a = out.audit;
  a.conjugation_error = out.endpoint_error;
  a.bound = bound_scale * 28.0 * out.eps_path * m;
  a.passed = out.endpoint_error <= 1e-8 * std::max(m, 1.0);
  for (const auto& xi : x) {
    const double c = op_norm(commutator(out.u, xi));
    a.commutators.push_back(c);
    a.passed = a.passed && c <= a.bound + 1e-8;
    a.worst_ratio = std::max(a.worst_ratio, a.bound > 0.0 ? c / a.bound : (c > 1e-8 ? INFINITY : 0.0));
  }
  return out;
}

struct CommutatorBoundCheck {
  double lhs = 0.0;    // ‖[χ(a), b]‖
  double bound = 0.0;  // ‖[a, b]‖ / (1 − 2δ)
  double ratio = 0.0;
  bool passed = true;
};

/// ‖[χ(a), b]‖ ≤ ‖[a, b]‖ / (1 − 2δ) for Hermitian a with spectrum outside
/// (δ, 1 − δ), χ the indicator of (1/2, ∞).
inline CommutatorBoundCheck spectral_projection_commutator_check(const ComplexMatrix& a, const ComplexMatrix& b,
                                                                 double delta, const Tolerances& tol = default_tolerances(),
                                                                 double slack = 1e-9, double bound_scale = 1.0) {
  if (!(delta > 0.0) || delta >= 0.5) throw Error(ErrorKind::HypothesisViolation, "need 0 < δ < 1/2", delta);
  const HermitianSpectrum spec = hermitian_spectrum(a, tol);
  for (Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const double l = spec.eigenvalues(i);
    if (l > delta && l < 1.0 - delta) {
      throw Error(ErrorKind::SpectralGapViolation, "spectrum meets (δ, 1 − δ)", l, static_cast<std::size_t>(i));
    }
  }
  const ComplexMatrix chi = spectral_projection(a, 0.5, 0.5 - delta - 1e-12, tol);
  CommutatorBoundCheck out;
  out.lhs = op_norm(commutator(chi, b));
  out.bound = bound_scale * op_norm(commutator(a, b)) / (1.0 - 2.0 * delta);
  out.ratio = out.bound > 0.0 ? out.lhs / out.bound : (out.lhs > slack ? INFINITY : 0.0);
  out.passed = out.lhs <= out.bound + slack;
  return out;
}

/// b is a 2N×2N matrix (M_2 ⊗ M_N, M_2 index slow) with e + b a projection,
/// e = diag(1_N, 0_N); q is an Nk×Nk projection in M_N ⊗ M_k.
struct PairingInput {
  ComplexMatrix b;
  ComplexMatrix q;
  Index n = 0;
  Index k = 0;
  double gap_tol = 0.05;
};

inline ComplexMatrix pairing_unit(Index n) {
  ComplexMatrix e = ComplexMatrix::Zero(2 * n, 2 * n);
  e.topLeftCorner(n, n).setIdentity();
  return e;
}

/// e ⊗ 1_k + (1_2 ⊗ q)(b ⊗ 1_k)(1_2 ⊗ q)
inline ComplexMatrix pairing_operand(const PairingInput& in) {
  const ComplexMatrix qq = kron(identity(2), in.q);
  return kron(pairing_unit(in.n), identity(in.k)) + qq * kron(in.b, identity(in.k)) * qq;
}

inline void validate(const PairingInput& in, const Tolerances& tol = default_tolerances()) {
  if (in.n < 1 || in.k < 1) throw Error(ErrorKind::InvalidSize, "pairing needs N, k >= 1");
  require_valid(in.b, "b");
  require_valid(in.q, "q");
  if (in.b.rows() != 2 * in.n) throw Error(ErrorKind::InvalidSize, "b must be 2N×2N");
  if (in.q.rows() != in.n * in.k) throw Error(ErrorKind::InvalidSize, "q must be Nk×Nk");
  const ComplexMatrix p = pairing_unit(in.n) + in.b;
  const double pd = projection_defect(p);
  if (pd > tol.spectral(p.rows())) throw Error(ErrorKind::NotProjection, "e + b is not a projection", pd);
  const double qd = projection_defect(in.q);
  if (qd > tol.spectral(in.q.rows())) throw Error(ErrorKind::NotProjection, "q is not a projection", qd);
}

struct PairingResult {
  ComplexMatrix projection;        // χ(operand)
  long index = 0;                  // rank(projection) − N·k
  long rank = 0;
  double gap = 0.0;                // distance from the operand's spectrum to 1/2
  double idempotency_defect = 0.0; // ‖χ² − χ‖
};

inline PairingResult pairing(const PairingInput& in, const Tolerances& tol = default_tolerances()) {
  validate(in, tol);
  const ComplexMatrix operand = pairing_operand(in);
  PairingResult out;
  out.gap = spectral_gap(operand, 0.5, tol);
  out.projection = spectral_projection(operand, 0.5, in.gap_tol, tol);
  out.idempotency_defect = op_norm(out.projection * out.projection - out.projection);
  out.rank = static_cast<long>(count_above(out.projection, 0.5, tol));
  out.index = out.rank - static_cast<long>(in.n * in.k);
  return out;
}

/// Block sum of two pairing inputs with the same k: N = N₁ + N₂, each 2×2
/// block of b and the M_N factor of q summed diagonally.
inline PairingInput block_sum(const PairingInput& x, const PairingInput& y) {
  if (x.k != y.k) throw Error(ErrorKind::InvalidSize, "pairing inputs need the same k");
  PairingInput out;
  out.n = x.n + y.n;
  out.k = x.k;
  out.gap_tol = std::max(x.gap_tol, y.gap_tol);
  out.b = ComplexMatrix::Zero(2 * out.n, 2 * out.n);
  for (Index bi = 0; bi < 2; ++bi) {
    for (Index bj = 0; bj < 2; ++bj) {
      out.b.block(bi * out.n, bj * out.n, x.n, x.n) = x.b.block(bi * x.n, bj * x.n, x.n, x.n);
      out.b.block(bi * out.n + x.n, bj * out.n + x.n, y.n, y.n) = y.b.block(bi * y.n, bj * y.n, y.n, y.n);
    }
  }
  out.q = block_sum(x.q, y.q);
  return out;
}

/// Finite element Σ_g g ⊗ c_g of ℂ[Γ] ⊗ M_k.
struct GroupAlgebraElement {
  std::vector<std::pair<GroupWord, ComplexMatrix>> terms;
  Index k = 1;
};

struct ProbeEntry {
  std::vector<double> eigenvalues;
  double window_distance = 0.0;  // how far the worst eigenvalue sits inside [1/4, 3/4]
  double probe_eps = 0.0;        // max_g ‖[p, π(g)]‖ for compression probes
  bool within_eps = true;
  bool passed = true;
};

struct ProbeReport {
  double eps = 0.0;
  std::vector<ProbeEntry> entries;
  bool all_passed = true;
};

/// For each probe φ, the spectrum of (φ ⊗ id)(q) must avoid [1/4, 3/4].
/// This samples a necessary condition; it certifies nothing about maps
/// outside the probe list.
inline ProbeReport compatibility_probe(const GroupAlgebraElement& q, const std::vector<QuasiRep>& probes, double eps) {
  ProbeReport report;
  report.eps = eps;
  for (const auto& phi : probes) {
    const Index d = phi.dim();
    ComplexMatrix img = ComplexMatrix::Zero(d * q.k, d * q.k);
    for (const auto& [g, c] : q.terms) {
      if (c.rows() != q.k || c.cols() != q.k) throw Error(ErrorKind::InvalidSize, "coefficient must be k×k");
      img += kron(phi.evaluate(g), c);
    }
    ProbeEntry e;
    if (phi.compression()) {
      for (const auto& g : phi.compression()->big_rep) {
        e.probe_eps = std::max(e.probe_eps, op_norm(commutator(phi.compression()->projection, g)));
      }
      e.within_eps = e.probe_eps < eps;
    }
    const ComplexMatrix sym = (img + img.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double l = es.eigenvalues()(i);
      e.eigenvalues.push_back(l);
      if (l >= 0.25 && l <= 0.75) {
        e.passed = false;
        e.window_distance = std::max(e.window_distance, std::min(l - 0.25, 0.75 - l));
      }
    }
    report.all_passed = report.all_passed && e.passed;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace obstructkit
