// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "obstructkit/obstructkit.hpp"

using namespace obstructkit;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Verdict()> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Voiculescu pairs: defect below δ, winding k by both methods.
Verdict voiculescu_realization() {
  Verdict v;
  int checked = 0;
  double worst_margin = 0.0;
  for (double delta : {0.5, 0.25, 0.1}) {
    for (int k = -5; k <= 5; ++k) {
      const auto [a, b] = voiculescu_pair(delta, k);
      const QuasiRep phi(free_abelian_presentation(2), {a, b}, Flavor::Unitary, NormalForm::Abelian);
      // on S = {a, b} the (b, a) pair measures ‖vu − uv‖
      const double d = defect(phi, {GroupWord::generator(0), GroupWord::generator(1)}).max_defect;
      const WindingReport w = winding_pair(a, b);
      const bool good = d < delta && w.eigenvalue_method == k && w.path_method == k && w.winding == k;
      worst_margin = std::max(worst_margin, d / delta);
      if (!good && v.ok) {
        v.ok = false;
        v.detail = fmt("delta %.2f k %d: defect %.4g, eig %d, path %d; ", delta, k, d, w.eigenvalue_method, w.path_method);
      }
      ++checked;
    }
  }
  v.detail += fmt("%d pairs, worst defect/delta %.4f", checked, worst_margin);
  return v;
}

// 2. Eigenvalue and path windings agree on random admissible unitaries.
Verdict winding_agreement() {
  Verdict v;
  double min_clearance = INFINITY;
  int mismatches = 0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    CounterRng rng(CounterRng::derive(0xA2, t));
    const Index n = rng.uniform_int(2, 40);
    const ComplexMatrix w = random_admissible_unitary(n, rng);
    try {
      const WindingReport r = winding_of_unitary(w);
      min_clearance = std::min(min_clearance, r.min_clearance);
      if (r.eigenvalue_method != r.path_method || !(r.min_clearance > 0.0)) ++mismatches;
    } catch (const Error& e) {
      ++mismatches;
      if (v.detail.empty()) v.detail = fmt("trial %llu threw %s; ", static_cast<unsigned long long>(t), e.what());
    }
  }
  v.ok = mismatches == 0;
  v.detail += fmt("10000 unitaries, %d disagreements, min clearance %.3g", mismatches, min_clearance);
  return v;
}

// 3. Unitarization: unitary output, ε-close on S, defect below 6ε.
Verdict unitarization_bound() {
  Verdict v;
  int violations = 0;
  double worst = 0.0;
  std::uint64_t salt = 0xA3;
  for (bool surface : {false, true}) {
    for (double eps : {0.01, 0.1}) {
      for (std::uint64_t t = 0; t < 1000; ++t) {
        CounterRng rng(CounterRng::derive(salt, t));
        TrialOutcome r;
        try {
          r = unitarize_trial(rng, 1.0, surface, eps);
        } catch (const Error& e) {
          r = {INFINITY, false, e.what()};
        }
        worst = std::max(worst, r.ratio);
        if (!r.passed) {
          ++violations;
          if (v.detail.empty()) v.detail = fmt("%s eps %.2f trial %llu: %s; ", surface ? "Sigma2" : "Z2", eps,
                                               static_cast<unsigned long long>(t), r.detail.c_str());
        }
      }
      ++salt;
    }
  }
  v.ok = violations == 0;
  v.detail += fmt("4000 trials, %d violations, worst ratio %.4f", violations, worst);
  return v;
}

// 4. Spectral-projection commutator ratio and connecting-unitary constants.
Verdict projection_constants() {
  Verdict v;
  int comm_bad = 0;
  int conn_bad = 0;
  double worst_excess = -INFINITY;  // ratio − 1/(1−2δ)
  double worst_conn = 0.0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    CounterRng rng(CounterRng::derive(0xA4, t));
    const Index n = rng.uniform_int(2, 12);
    const double delta = rng.uniform(0.01, 0.45);
    RealVector d(n);
    for (Index i = 0; i < n; ++i) d(i) = rng.uniform() < 0.5 ? rng.uniform(0.0, delta) : rng.uniform(1.0 - delta, 1.0);
    const ComplexMatrix w = random_unitary(n, rng);
    const ComplexMatrix a = w * d.cast<Complex>().asDiagonal() * w.adjoint();
    const ComplexMatrix b = rng.uniform() < 0.5 ? random_ginibre(n, n, rng)
                                                : ComplexMatrix(a * rng.normal() + 0.03 * random_unit_direction(n, rng));
    const double ab = op_norm(commutator(a, b));
    const CommutatorBoundCheck c = spectral_projection_commutator_check(a, b, delta);
    const double ratio = ab > 0.0 ? c.lhs / ab : 0.0;
    worst_excess = std::max(worst_excess, ratio - 1.0 / (1.0 - 2.0 * delta));
    if (ratio > 1.0 / (1.0 - 2.0 * delta) + 1e-9 || (ab == 0.0 && c.lhs > 1e-9)) ++comm_bad;

    CounterRng crng(CounterRng::derive(0xB4, t));
    TrialOutcome r;
    try {
      r = connecting_unitary_trial(crng, 1.0);
    } catch (const Error& e) {
      r = {INFINITY, false, e.what()};
    }
    worst_conn = std::max(worst_conn, r.ratio);
    if (!r.passed) {
      ++conn_bad;
      if (v.detail.empty()) v.detail = fmt("connecting trial %llu: %s; ", static_cast<unsigned long long>(t), r.detail.c_str());
    }
  }
  v.ok = comm_bad == 0 && conn_bad == 0;
  v.detail += fmt("commutator: %d violations, max ratio - 1/(1-2d) = %.3g; connecting: %d violations, worst ratio to 28eps %.4f",
                  comm_bad, worst_excess, conn_bad, worst_conn);
  return v;
}

// 5. ρ(q) = −q mod 1 exactly; Abel-regularized η = 1 − 2q on a 199-point grid.
Verdict eta_reproduction() {
  Verdict v;
  int exact_bad = 0;
  for (std::int64_t den = 1; den <= 60; ++den) {
    for (std::int64_t num = 0; num < den; ++num) {
      const Fraction q = Fraction::make(num, den);
      if (!(rho_character_exact(q) == Fraction::make(den - num, den))) ++exact_bad;
    }
  }
  double worst = 0.0;
  int grid_bad = 0;
  for (int j = 1; j <= 199; ++j) {
    const double q = j / 200.0;
    const EtaResult e = eta_character_abel(CharacterTwist(q));
    const double err = std::abs(e.eta - (1.0 - 2.0 * q));
    worst = std::max(worst, err);
    if (!(err <= 1e-6) || e.kernel_dim != 0) ++grid_bad;
    const double rho = rho_character(CharacterTwist(q)).rho_mod_z;
    if (std::abs(rho - mod1(-q)) > 1e-15) ++exact_bad;
  }
  v.ok = exact_bad == 0 && grid_bad == 0;
  v.detail = fmt("exact rho mismatches %d, grid failures %d, max |eta - (1-2q)| %.3g", exact_bad, grid_bad, worst);
  return v;
}

// 6. Exact homology fixtures.
Verdict homology_fixtures() {
  const IntMatrix j{{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};
  const IntMatrix a{{5, 3, 0, 0}, {3, 2, 0, 0}, {0, 0, 5, 3}, {0, 0, 3, 2}};
  const IntMatrix r{{0, 0, -1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, 1, 0, 0}};
  const std::string torus = free_by_cyclic_h2(IntMatrix{{1}}).render();
  const std::string klein = free_by_cyclic_h2(IntMatrix{{-1}}).render();
  const std::string example = mapping_torus_surface_h2(-1, r * a).render();
  const bool sympl = symplectic_check(a, j);
  Verdict v;
  v.ok = torus == "Z" && klein == "0" && example == "Z/2" && sympl;
  v.detail = "torus " + torus + ", klein " + klein + ", mapping torus " + example + ", symplectic " + (sympl ? "yes" : "no");
  return v;
}

// Pairing instances: e + b and q simultaneously diagonalizable up to a block
// unitary, then q nudged by a small rotation. The operand stays within 0.15
// of a projection, so the gap survives and the index is the overlap count.
struct PairingInstance {
  PairingInput input;
  long expected = 0;
};

ComplexMatrix diag01(const std::vector<int>& bits) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(bits.size()), static_cast<Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = bits[i];
  return m;
}

PairingInstance pairing_instance(Index n, Index k, CounterRng& rng) {
  std::vector<int> ps, qs;
  for (Index i = 0; i < n; ++i) {
    ps.push_back(rng.uniform() < 0.5);
    qs.push_back(rng.uniform() < 0.5);
  }
  // unitary preserving both coordinate splittings of q
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (int bit : {0, 1}) {
    std::vector<Index> idx;
    for (Index i = 0; i < n; ++i)
      if (qs[static_cast<std::size_t>(i)] == bit) idx.push_back(i);
    if (idx.empty()) continue;
    const ComplexMatrix u = random_unitary(static_cast<Index>(idx.size()), rng);
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) w(idx[r], idx[c]) = u(static_cast<Index>(r), static_cast<Index>(c));
  }
  const ComplexMatrix ww = block_sum(w, w);
  ComplexMatrix p = ww * block_sum(identity(n), diag01(ps)) * ww.adjoint();
  PairingInstance out;
  out.input.n = n;
  out.input.k = k;
  out.input.b = (p + p.adjoint()) * 0.5 - pairing_unit(n);
  ComplexMatrix h = random_hermitian(n * k, rng);
  h /= op_norm(h);
  const ComplexMatrix rot = exp_i_hermitian(h, rng.uniform(0.0, 0.02));
  const ComplexMatrix q = rot * kron(diag01(qs), identity(k)) * rot.adjoint();
  out.input.q = (q + q.adjoint()) * 0.5;
  for (Index i = 0; i < n; ++i) out.expected += ps[static_cast<std::size_t>(i)] * qs[static_cast<std::size_t>(i)];
  out.expected *= static_cast<long>(k);
  return out;
}

// 7. Pairing: b = 0 has index 0, block sums add, χ is idempotent.
Verdict pairing_sanity() {
  Verdict v;
  double worst_idem = 0.0;
  int zero_bad = 0;
  int add_bad = 0;
  int applications = 0;
  auto track = [&](const PairingResult& r) {
    worst_idem = std::max(worst_idem, r.idempotency_defect);
    ++applications;
    return r;
  };
  for (std::uint64_t t = 0; t < 500; ++t) {
    CounterRng rng(CounterRng::derive(0xA7, t));
    const Index k = rng.uniform_int(1, 3);
    PairingInput zero;
    zero.n = rng.uniform_int(1, 4);
    zero.k = k;
    zero.b = ComplexMatrix::Zero(2 * zero.n, 2 * zero.n);
    const Index rank = rng.uniform_int(0, static_cast<int>(zero.n * k));
    zero.q = rank == 0 ? ComplexMatrix(ComplexMatrix::Zero(zero.n * k, zero.n * k)) : random_projection(zero.n * k, rank, rng);
    if (track(pairing(zero)).index != 0) ++zero_bad;

    const PairingInstance x = pairing_instance(rng.uniform_int(1, 4), k, rng);
    const PairingInstance y = pairing_instance(rng.uniform_int(1, 4), k, rng);
    const long ix = track(pairing(x.input)).index;
    const long iy = track(pairing(y.input)).index;
    const long ixy = track(pairing(block_sum(x.input, y.input))).index;
    if (ixy != ix + iy || ix != x.expected || iy != y.expected) {
      ++add_bad;
      if (v.detail.empty()) v.detail = fmt("instance %llu: %ld + %ld vs %ld; ", static_cast<unsigned long long>(t), ix, iy, ixy);
    }
  }
  v.ok = zero_bad == 0 && add_bad == 0 && worst_idem <= 1e-10;
  v.detail += fmt("b=0 failures %d, additivity failures %d over 500, %d chi applications, worst idempotency %.3g",
                  zero_bad, add_bad, applications, worst_idem);
  return v;
}

// 8. Obstruction counts follow the case analysis.
Verdict obstruction_table() {
  Verdict v;
  std::ostringstream out;
  auto expect = [&](const GroupFamily& f, std::size_t want, const std::string& label) {
    const std::size_t got = obstruction_count(f);
    if (got != want) {
      v.ok = false;
      out << label << " gave " << got << "; ";
    }
  };
  int rows = 0;
  for (int g = 1; g <= 6; ++g) {
    expect(SurfaceFamily{g, true}, 1, fmt("orientable genus %d", g));
    expect(SurfaceFamily{g, false}, 0, fmt("non-orientable genus %d", g));
    rows += 2;
  }
  for (int n : {1, 2, 3, 5, -4}) {
    expect(BaumslagSolitarFamily{n, n}, 1, fmt("BS(%d,%d)", n, n));
    expect(BaumslagSolitarFamily{n, -n}, 0, fmt("BS(%d,%d)", n, -n));
    // the count must agree with the commutator-relator count of the presentation
    expect(BaumslagSolitarFamily{n, n}, commutator_relator_count(baumslag_solitar_presentation(n, n)), "BS relator count");
    rows += 3;
  }
  out << rows << " table rows checked";
  v.detail = out.str();
  return v;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "voiculescu realization", 5.0, voiculescu_realization},
      {2, "winding dual-method agreement", 60.0, winding_agreement},
      {3, "unitarization bound", 120.0, unitarization_bound},
      {4, "almost-projection constants", 120.0, projection_constants},
      {5, "eta closed form", 10.0, eta_reproduction},
      {6, "homology fixtures", 1.0, homology_fixtures},
      {7, "pairing sanity", 60.0, pairing_sanity},
      {8, "obstruction table", 1.0, obstruction_table},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = v.ok && in_time;
    failed += pass ? 0 : 1;
    std::printf("criterion %d %-32s %s  %.2fs (limit %.0fs%s)  %s\n", c.id, c.name.c_str(), pass ? "PASS" : "FAIL", secs,
                c.limit_seconds, in_time ? "" : ", exceeded", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
