#include <gtest/gtest.h>

#include <numbers>

#include "obstructkit/projops.hpp"
#include "obstructkit/random.hpp"

using namespace obstructkit;

namespace {

ComplexMatrix rank_one(double theta) {
  ComplexMatrix v(2, 1);
  v << std::cos(theta), std::sin(theta);
  return v * v.adjoint();
}

ComplexMatrix coordinate_projection(const std::vector<int>& bits) {
  std::vector<double> d(bits.begin(), bits.end());
  RealVector r = Eigen::Map<RealVector>(d.data(), static_cast<Index>(d.size()));
  return r.cast<Complex>().asDiagonal();
}

std::vector<int> random_bits(Index n, CounterRng& rng) {
  std::vector<int> b;
  for (Index i = 0; i < n; ++i) b.push_back(rng.uniform() < 0.5 ? 1 : 0);
  return b;
}

/// Unitary on ℂ^n commuting with a diagonal 0/1 projection: a random unitary
/// on each of its two coordinate blocks.
ComplexMatrix commuting_unitary(const std::vector<int>& bits, CounterRng& rng) {
  const Index n = static_cast<Index>(bits.size());
  std::vector<Index> on, off;
  for (Index i = 0; i < n; ++i) (bits[static_cast<std::size_t>(i)] ? on : off).push_back(i);
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (const auto* part : {&on, &off}) {
    if (part->empty()) continue;
    const ComplexMatrix u = random_unitary(static_cast<Index>(part->size()), rng);
    for (std::size_t i = 0; i < part->size(); ++i)
      for (std::size_t j = 0; j < part->size(); ++j) w((*part)[i], (*part)[j]) = u(static_cast<Index>(i), static_cast<Index>(j));
  }
  return w;
}

struct Instance {
  PairingInput input;
  long expected = 0;
};

/// e + b = w' diag(1_N, P_s) w'* with P_s, q diagonal (k = 1 after the ⊗ 1_k
/// factor) and w' = w ⊕ w commuting with q. The operand is then unitarily
/// equivalent to diag(1_N, q P_s q), so the index counts the overlap of q
/// and P_s.
Instance commuting_instance(Index n, Index k, CounterRng& rng) {
  const std::vector<int> ps = random_bits(n, rng);
  const std::vector<int> qbits = random_bits(n, rng);
  ComplexMatrix p = block_sum(identity(n), coordinate_projection(ps));
  const ComplexMatrix w = commuting_unitary(qbits, rng);
  const ComplexMatrix ww = block_sum(w, w);
  p = ww * p * ww.adjoint();
  Instance out;
  out.input.n = n;
  out.input.k = k;
  out.input.b = (p + p.adjoint()) * 0.5 - pairing_unit(n);
  out.input.q = kron(coordinate_projection(qbits), identity(k));
  for (Index i = 0; i < n; ++i) out.expected += ps[static_cast<std::size_t>(i)] * qbits[static_cast<std::size_t>(i)];
  out.expected *= static_cast<long>(k);
  return out;
}

/// Rank by eigenvalue count of the operand itself.
long eigen_count_index(const PairingInput& in) {
  const ComplexMatrix op = pairing_operand(in);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((op + op.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return static_cast<long>((es.eigenvalues().array() > 0.5).count()) - static_cast<long>(in.n * in.k);
}

}  // namespace

TEST(Projops, ContextEps) {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const ProjectionPairContext ctx(rank_one(0.0), rank_one(0.1), {x});
  EXPECT_NEAR(ctx.eps, std::max(op_norm(commutator(rank_one(0.0), x)), op_norm(commutator(rank_one(0.1), x))), 1e-15);
  EXPECT_THROW(ProjectionPairContext(0.5 * identity(2), rank_one(0), {}), Error);
}

TEST(Projops, ConnectingUnitaryRankOne) {
  for (double theta : {0.0, 0.05, 0.2, std::asin(0.25) - 1e-3}) {
    const ProjectionPairContext ctx(rank_one(0.0), rank_one(theta), {identity(2)});
    const ConnectingUnitary cu = connecting_unitary(ctx);
    EXPECT_LT(op_norm(cu.u * ctx.p * cu.u.adjoint() - ctx.q), 1e-12);
    EXPECT_LT(unitarity_defect(cu.u), 1e-12);
    EXPECT_LT(cu.audit.commutators[0], 1e-14);
    EXPECT_TRUE(cu.audit.passed);
  }
}

TEST(Projops, ConnectingUnitaryEqualProjections) {
  CounterRng rng(3);
  const ComplexMatrix p = random_projection(5, 2, rng);
  std::vector<ComplexMatrix> x{random_unitary(5, rng)};
  const ProjectionPairContext ctx(p, p, x);
  const ConnectingUnitary cu = connecting_unitary(ctx);
  EXPECT_LT(op_norm(cu.u * p * cu.u.adjoint() - p), 1e-12);
  EXPECT_LE(cu.audit.commutators[0], 28.0 * ctx.eps + 1e-9);
}

TEST(Projops, ConnectingUnitaryRandomized) {
  CounterRng rng(404);
  for (int t = 0; t < 300; ++t) {
    const Index n = rng.uniform_int(2, 10);
    const ComplexMatrix p = random_projection(n, rng.uniform_int(1, static_cast<int>(n) - 1), rng);
    ComplexMatrix h = random_hermitian(n, rng);
    h /= op_norm(h);
    const ComplexMatrix w = exp_i_hermitian(h, rng.uniform(0.0, 0.1));
    ComplexMatrix q = w * p * w.adjoint();
    q = (q + q.adjoint()) * 0.5;
    std::vector<ComplexMatrix> x;
    for (int i = 0; i < 3; ++i) x.push_back(random_unitary(n, rng));
    const ProjectionPairContext ctx(p, q, x);
    const ConnectingUnitary cu = connecting_unitary(ctx);
    EXPECT_LE(cu.audit.conjugation_error, 1e-9);
    EXPECT_LT(unitarity_defect(cu.u), 1e-10);
    for (double c : cu.audit.commutators) EXPECT_LE(c, 28.0 * ctx.eps + 1e-9);
    EXPECT_TRUE(cu.audit.passed);
  }
}

TEST(Projops, ConnectingUnitaryGapGate) {
  try {
    connecting_unitary(ProjectionPairContext(rank_one(0.0), rank_one(0.3), {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolation);
    EXPECT_NEAR(e.measured().value_or(0), std::sin(0.3), 1e-12);
  }
}

TEST(Projops, ChainSixtyFiveSteps) {
  const int m = 65;
  std::vector<ComplexMatrix> path;
  for (int i = 0; i <= m; ++i) path.push_back(rank_one(std::numbers::pi / 3.0 * i / m));
  CounterRng rng(1);
  ComplexMatrix x = 0.05 * random_hermitian(2, rng) + identity(2);
  x /= op_norm(x);
  const ChainConjugation c = chain_conjugation(path, {x});
  EXPECT_EQ(c.steps, 65u);
  EXPECT_LT(c.endpoint_error, 1e-8 * m);
  EXPECT_NEAR(c.audit.bound, 28.0 * 65.0 * c.eps_path, 1e-15);
  EXPECT_TRUE(c.audit.passed);
}

TEST(Projops, ChainConstantAndTwoStep) {
  CounterRng rng(2);
  const ComplexMatrix p = random_projection(4, 2, rng);
  const std::vector<ComplexMatrix> x{random_unitary(4, rng)};
  const ChainConjugation c = chain_conjugation({p, p, p}, x);
  EXPECT_LT(op_norm(c.u * p * c.u.adjoint() - p), 1e-12);
  EXPECT_TRUE(c.audit.passed);

  ComplexMatrix h = random_hermitian(4, rng);
  h /= op_norm(h);
  const ComplexMatrix w = exp_i_hermitian(h, 0.05);
  const ComplexMatrix q = w * p * w.adjoint();
  const ComplexMatrix r = w * q * w.adjoint();
  const ChainConjugation two = chain_conjugation({p, q, r}, x);
  const ComplexMatrix u1 = connecting_unitary(ProjectionPairContext(p, (q + q.adjoint()) * 0.5, x)).u;
  const ComplexMatrix u2 = connecting_unitary(ProjectionPairContext((q + q.adjoint()) * 0.5, (r + r.adjoint()) * 0.5, x)).u;
  EXPECT_LT(op_norm(two.u - u2 * u1), 1e-10);
}

TEST(Projops, ChainTooCoarse) {
  try {
    chain_conjugation({rank_one(0.0), rank_one(0.1), rank_one(0.5)}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SubdivisionTooCoarse);
    EXPECT_EQ(e.index().value_or(99), 1u);
  }
}

TEST(Projops, SpectralProjectionCommutatorBound) {
  CounterRng rng(9);
  for (int t = 0; t < 300; ++t) {
    const Index n = rng.uniform_int(2, 8);
    const double delta = rng.uniform(0.01, 0.45);
    std::vector<double> eig;
    for (Index i = 0; i < n; ++i) eig.push_back(rng.uniform() < 0.5 ? rng.uniform(0, delta) : rng.uniform(1 - delta, 1));
    const ComplexMatrix v = random_unitary(n, rng);
    RealVector d = Eigen::Map<RealVector>(eig.data(), n);
    const ComplexMatrix a = v * d.cast<Complex>().asDiagonal() * v.adjoint();
    const ComplexMatrix b = random_ginibre(n, n, rng);
    const CommutatorBoundCheck c = spectral_projection_commutator_check(a, b, delta);
    EXPECT_TRUE(c.passed) << c.lhs << " vs " << c.bound;
    EXPECT_LE(c.lhs, op_norm(commutator(a, b)) / (1.0 - 2.0 * delta) + 1e-9);
  }
}

TEST(Projops, SpectralCommutatorRejectsSpectrumOutsideWindows) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 0.5;
  a(1, 1) = 1.0;
  EXPECT_THROW(spectral_projection_commutator_check(a, identity(2), 0.1), Error);
}

TEST(Projops, PairingTrivial) {
  for (Index n : {1, 2, 3}) {
    for (Index k : {1, 2}) {
      PairingInput in{ComplexMatrix::Zero(2 * n, 2 * n), identity(n * k), n, k};
      const PairingResult r = pairing(in);
      EXPECT_EQ(r.index, 0);
      EXPECT_TRUE(approx_equal(r.projection, kron(pairing_unit(n), identity(k)), 1e-12));
      EXPECT_LT(r.idempotency_defect, 1e-10);
    }
  }
}

TEST(Projops, PairingSameRankConjugated) {
  // q = 1, e + b a unitary conjugate of e: rank N, index 0.
  CounterRng rng(10);
  for (int t = 0; t < 20; ++t) {
    const Index n = rng.uniform_int(1, 4);
    const ComplexMatrix w = random_unitary(2 * n, rng);
    ComplexMatrix p = w * pairing_unit(n) * w.adjoint();
    p = (p + p.adjoint()) * 0.5;
    const PairingInput in{p - pairing_unit(n), identity(n), n, 1};
    EXPECT_EQ(pairing(in).index, 0);
    EXPECT_EQ(eigen_count_index(in), 0);
  }
}

TEST(Projops, PairingCommutingConstruction) {
  CounterRng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Instance inst = commuting_instance(rng.uniform_int(1, 5), rng.uniform_int(1, 3), rng);
    const PairingResult r = pairing(inst.input);
    EXPECT_EQ(r.index, inst.expected);
    EXPECT_EQ(r.index, eigen_count_index(inst.input));
    EXPECT_LT(r.idempotency_defect, 1e-10);
  }
}

TEST(Projops, PairingAdditivity) {
  CounterRng rng(12);
  for (int t = 0; t < 100; ++t) {
    const Index k = rng.uniform_int(1, 3);
    const Instance a = commuting_instance(rng.uniform_int(1, 4), k, rng);
    const Instance b = commuting_instance(rng.uniform_int(1, 4), k, rng);
    const PairingResult r = pairing(block_sum(a.input, b.input));
    EXPECT_EQ(r.index, pairing(a.input).index + pairing(b.input).index);
    EXPECT_LT(r.idempotency_defect, 1e-10);
  }
}

TEST(Projops, PairingConjugationInvariance) {
  CounterRng rng(13);
  for (int t = 0; t < 50; ++t) {
    const Index n = rng.uniform_int(1, 4);
    const Instance inst = commuting_instance(n, 1, rng);
    // w commuting with q: block unitary on the q-coordinates
    std::vector<int> qbits;
    for (Index i = 0; i < n; ++i) qbits.push_back(std::abs(inst.input.q(i, i)) > 0.5 ? 1 : 0);
    const ComplexMatrix w = commuting_unitary(qbits, rng);
    const ComplexMatrix ww = block_sum(w, w);
    PairingInput moved = inst.input;
    moved.b = ww * inst.input.b * ww.adjoint();
    moved.q = w * inst.input.q * w.adjoint();
    EXPECT_EQ(pairing(moved).index, pairing(inst.input).index);
  }
}

TEST(Projops, PairingGapViolation) {
  // e + b the projection onto (e_1 + e_2)/√2 shifted into a generic q: the
  // operand e + QbQ then has an eigenvalue near 1/2.
  CounterRng rng(14);
  bool seen = false;
  for (int t = 0; t < 200 && !seen; ++t) {
    const Index n = 2;
    ComplexMatrix p = random_projection(2 * n, n, rng);
    const PairingInput in{p - pairing_unit(n), random_projection(n, 1, rng), n, 1, 0.05};
    if (spectral_gap(pairing_operand(in), 0.5) >= 0.05) continue;
    seen = true;
    try {
      pairing(in);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::SpectralGapViolation);
      ASSERT_TRUE(e.measured().has_value());
      EXPECT_LT(std::abs(*e.measured() - 0.5), 0.05);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Projops, PairingValidation) {
  PairingInput bad{ComplexMatrix::Zero(2, 2), 0.5 * identity(1), 1, 1};
  EXPECT_THROW(pairing(bad), Error);
  PairingInput wrong{ComplexMatrix::Zero(3, 3), identity(1), 1, 1};
  EXPECT_THROW(pairing(wrong), Error);
}

TEST(Projops, CompatibilityProbe) {
  const Presentation z2 = free_abelian_presentation(1);
  ComplexMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const CompressionResult split = compress(z2, {swap}, coordinate_projection({1, 0}));
  const CompressionResult whole = compress(z2, {swap}, identity(2));
  const GroupWord e, a = GroupWord::generator(0);

  GroupAlgebraElement zero{{{e, ComplexMatrix::Zero(1, 1)}}, 1};
  GroupAlgebraElement one{{{e, identity(1)}}, 1};
  EXPECT_TRUE(compatibility_probe(zero, {split.rep, whole.rep}, 0.1).all_passed);
  EXPECT_TRUE(compatibility_probe(one, {split.rep, whole.rep}, 0.1).all_passed);

  // (e + a)/2: a projection in ℂ[ℤ/2]; the split probe compresses it to 1/2.
  GroupAlgebraElement half{{{e, 0.5 * identity(1)}, {a, 0.5 * identity(1)}}, 1};
  const ProbeReport r = compatibility_probe(half, {whole.rep, split.rep}, 0.1);
  EXPECT_TRUE(r.entries[0].passed);
  EXPECT_FALSE(r.entries[1].passed);
  EXPECT_NEAR(r.entries[1].eigenvalues[0], 0.5, 1e-12);
  EXPECT_FALSE(r.entries[1].within_eps);
  EXPECT_FALSE(r.all_passed);
}
