#pragma once

// Seeded random instances used by the audit suites and the tests.

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "obstructkit/matcore.hpp"
#include "obstructkit/quasirep.hpp"
#include "obstructkit/rng.hpp"
#include "obstructkit/words.hpp"

namespace obstructkit {

inline ComplexMatrix random_ginibre(Index rows, Index cols, CounterRng& rng) {
  ComplexMatrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  return g;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal absorbed into Q.
inline ComplexMatrix random_unitary(Index n, CounterRng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline ComplexMatrix random_hermitian(Index n, CounterRng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  return (g + g.adjoint()) * 0.5;
}

/// Matrix with operator norm exactly 1 (or 0 for n = 0).
inline ComplexMatrix random_unit_direction(Index n, CounterRng& rng) {
  const ComplexMatrix g = random_ginibre(n, n, rng);
  return g / op_norm(g);
}

inline ComplexMatrix random_projection(Index n, Index rank, CounterRng& rng) {
  const ComplexMatrix w = random_unitary(n, rng);
  return w.leftCols(rank) * w.leftCols(rank).adjoint();
}

inline ComplexMatrix diagonal_phases(const std::vector<double>& angles) {
  const auto n = static_cast<Index>(angles.size());
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = std::polar(1.0, angles[static_cast<std::size_t>(i)]);
  return d;
}

/// `count` commuting unitaries: random phases in a common random basis.
inline std::vector<ComplexMatrix> random_commuting_unitaries(Index n, int count, CounterRng& rng) {
  const ComplexMatrix w = random_unitary(n, rng);
  std::vector<ComplexMatrix> out;
  for (int c = 0; c < count; ++c) {
    std::vector<double> angles;
    for (Index i = 0; i < n; ++i) angles.push_back(rng.uniform(-std::numbers::pi, std::numbers::pi));
    out.push_back(w * diagonal_phases(angles) * w.adjoint());
  }
  return out;
}

/// Random unitary W = V diag(e^{iθ}) V* with |θ_j| ≤ max_angle (< π/3, so
/// ‖W − 1‖ < 1) and Σθ_j ∈ 2πℤ, i.e. an admissible input to the winding
/// computation.
inline ComplexMatrix random_admissible_unitary(Index n, CounterRng& rng, double max_angle = 0.95 * std::numbers::pi / 3.0) {
  for (;;) {
    std::vector<double> theta;
    double sum = 0.0;
    for (Index i = 0; i < n; ++i) {
      theta.push_back(rng.uniform(-max_angle, max_angle));
      sum += theta.back();
    }
    const double target = 2.0 * std::numbers::pi * std::round(sum / (2.0 * std::numbers::pi));
    const double shift = (target - sum) / static_cast<double>(n);
    bool ok = true;
    for (auto& t : theta) {
      t += shift;
      ok = ok && std::abs(t) <= max_angle;
    }
    if (!ok) continue;
    const ComplexMatrix v = random_unitary(n, rng);
    return v * diagonal_phases(theta) * v.adjoint();
  }
}

/// Scales m into the closed unit ball if needed.
inline ComplexMatrix clamp_to_unit_ball(const ComplexMatrix& m) {
  const double norm = op_norm(m);
  return norm > 1.0 ? ComplexMatrix(m / norm) : m;
}

/// (S, ·)-representation obtained from an honest representation by
/// perturbing its value at every element of S ∪ S² independently by at most
/// η in norm and clamping to the unit ball.
inline QuasiRep perturbed_quasi_rep(const QuasiRep& honest, const std::vector<GroupWord>& set, double eta,
                                    CounterRng& rng) {
  std::map<GroupWord, ComplexMatrix> table;
  auto perturb = [&](const GroupWord& w) {
    const GroupWord key = honest.normalize(w);
    if (key.empty() || table.count(key)) return;
    const ComplexMatrix base = honest.evaluate(key);
    table[key] = clamp_to_unit_ball(base + eta * random_unit_direction(honest.dim(), rng));
  };
  for (const auto& s : set) perturb(s);
  for (const auto& s : set)
    for (const auto& t : set) perturb(s * t);
  QuasiRep general(honest.presentation(), honest.images(), Flavor::General, honest.normal_form(), honest.tolerances());
  return general.with_values(table, Extension::WordProduct);
}

/// Honest representation of the genus-2 surface group: a, b arbitrary
/// unitaries, c = b, d = a, so [a,b][c,d] = [a,b][b,a] = 1.
inline std::vector<ComplexMatrix> random_genus2_rep(Index n, CounterRng& rng) {
  const ComplexMatrix a = random_unitary(n, rng);
  const ComplexMatrix b = random_unitary(n, rng);
  return {a, b, b, a};
}

/// Honest representation of a closed surface group. Orientable genus g:
/// consecutive handle pairs map to (U, V), (V, U) so their commutators
/// cancel, and an unpaired last handle gets commuting diagonal phases.
/// Non-orientable: diagonal ±1 matrices, whose squares are 1.
inline std::vector<ComplexMatrix> random_surface_rep(int genus, bool orientable, Index n, CounterRng& rng) {
  std::vector<ComplexMatrix> images;
  if (!orientable) {
    for (int i = 0; i < genus; ++i) {
      std::vector<double> angles;
      for (Index j = 0; j < n; ++j) angles.push_back(rng.uniform() < 0.5 ? 0.0 : std::numbers::pi);
      images.push_back(diagonal_phases(angles));
    }
    return images;
  }
  for (int h = 0; h + 1 < genus; h += 2) {
    const auto pair = random_genus2_rep(n, rng);
    images.insert(images.end(), pair.begin(), pair.end());
  }
  if (genus % 2 == 1) {
    const auto last = random_commuting_unitaries(n, 2, rng);
    images.insert(images.end(), last.begin(), last.end());
  }
  return images;
}

}  // namespace obstructkit
