#pragma once

// Randomized bound-audit suites. Each trial draws from its own counter-based
// stream keyed by (seed, suite, trial index), so any trial can be replayed
// in isolation and results do not depend on thread scheduling.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "obstructkit/matcore.hpp"
#include "obstructkit/projops.hpp"
#include "obstructkit/quasirep.hpp"
#include "obstructkit/random.hpp"
#include "obstructkit/rng.hpp"
#include "obstructkit/words.hpp"

namespace obstructkit {

struct TrialOutcome {
  double ratio = 0.0;  // measured / bound, worst over the trial's checks
  bool passed = true;
  std::string detail;
};

struct TrialFailure {
  std::size_t trial = 0;
  std::uint64_t trial_key = 0;
  double ratio = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::string constant;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  bool passed = true;
  std::vector<TrialFailure> failures;
  double seconds = 0.0;
};

struct AuditOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  double bound_scale = 1.0;  // multiplies every audited constant; < 1 forces failures for replay testing
  unsigned threads = 0;      // 0: OBSTRUCTKIT_THREADS or hardware concurrency
};

inline unsigned worker_count(unsigned requested) {
  unsigned n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OBSTRUCTKIT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

using TrialFn = std::function<TrialOutcome(CounterRng&, double bound_scale)>;

struct Suite {
  std::string name;
  std::string constant;
  std::uint64_t salt;
  TrialFn trial;
};

namespace detail {

inline Index uniform_dim(CounterRng& rng, int lo, int hi) { return static_cast<Index>(rng.uniform_int(lo, hi)); }

/// Unitary commuting with the projection p (block diagonal in its eigenbasis).
inline ComplexMatrix unitary_commuting_with(const ComplexMatrix& p, CounterRng& rng) {
  const HermitianSpectrum spec = hermitian_spectrum(p);
  const Index n = p.rows();
  const Index r = (spec.eigenvalues.array() > 0.5).count();
  ComplexMatrix blocks = ComplexMatrix::Zero(n, n);
  if (n - r > 0) blocks.topLeftCorner(n - r, n - r) = random_unitary(n - r, rng);
  if (r > 0) blocks.bottomRightCorner(r, r) = random_unitary(r, rng);
  return spec.eigenvectors * blocks * spec.eigenvectors.adjoint();
}

/// Unitary within roughly `size` of one.
inline ComplexMatrix small_rotation(Index n, double size, CounterRng& rng) {
  ComplexMatrix h = random_hermitian(n, rng);
  h /= op_norm(h);
  return exp_i_hermitian(h, size);
}

}  // namespace detail

/// Unitarization: outputs unitary, within ε of the input on S, defect < 6ε.
inline TrialOutcome unitarize_trial(CounterRng& rng, double bound_scale, bool surface, double eps) {
  const Index n = detail::uniform_dim(rng, 2, 5);
  QuasiRep honest = surface
                        ? QuasiRep(surface_presentation(2, true), random_genus2_rep(n, rng), Flavor::Unitary)
                        : QuasiRep(free_abelian_presentation(2), random_commuting_unitaries(n, 2, rng), Flavor::Unitary,
                                   NormalForm::Abelian);
  const auto set = symmetric_generating_set(honest.presentation().num_generators());
  const double eta = eps / 7.0 * rng.uniform(0.2, 1.0);
  const QuasiRep pi = perturbed_quasi_rep(honest, set, eta, rng);
  TrialOutcome out;
  const double pre = defect(pi, set).max_defect;
  if (pre >= eps) {
    out.passed = false;
    out.ratio = pre / eps;
    out.detail = "generated input defect " + std::to_string(pre) + " not below eps";
    return out;
  }
  const QuasiRep sigma = unitarize(pi, set, eps);
  double unitarity = 0.0;
  double closeness = 0.0;
  for (const auto& s : set) {
    const ComplexMatrix v = sigma.evaluate(s);
    unitarity = std::max(unitarity, unitarity_defect(v));
    closeness = std::max(closeness, op_norm(v - pi.evaluate(s)));
  }
  const double post = defect(sigma, set).max_defect;
  const double defect_bound = bound_scale * 6.0 * eps;
  const double close_bound = bound_scale * eps;
  out.ratio = std::max(post / defect_bound, closeness / close_bound);
  out.passed = unitarity <= 1e-10 && closeness < close_bound && post < defect_bound;
  out.detail = std::string(surface ? "surface genus 2" : "Z^2") + ", eps " + std::to_string(eps) + ", dim " +
               std::to_string(n) + ": unitarity " + std::to_string(unitarity) + ", closeness " +
               std::to_string(closeness) + ", defect " + std::to_string(post);
  return out;
}

/// ‖φ(gs) − φ(g)φ(s)‖ ≤ √ε for compressions of honest representations.
inline TrialOutcome ucp_extend_trial(CounterRng& rng, double bound_scale) {
  const bool surface = rng.uniform() < 0.5;
  const Index n1 = detail::uniform_dim(rng, 1, 4);
  const Index n2 = detail::uniform_dim(rng, 1, 4);
  Presentation pres = surface ? surface_presentation(2, true) : free_abelian_presentation(2);
  std::vector<ComplexMatrix> r1 = surface ? random_genus2_rep(n1, rng) : random_commuting_unitaries(n1, 2, rng);
  std::vector<ComplexMatrix> r2 = surface ? random_genus2_rep(n2, rng) : random_commuting_unitaries(n2, 2, rng);
  std::vector<ComplexMatrix> big;
  for (std::size_t g = 0; g < r1.size(); ++g) big.push_back(block_sum(r1[g], r2[g]));
  const Index n = n1 + n2;
  const ComplexMatrix p0 = block_sum(identity(n1), ComplexMatrix::Zero(n2, n2));
  const ComplexMatrix w = detail::small_rotation(n, rng.uniform(0.0, 0.3), rng);
  const ComplexMatrix p = w * p0 * w.adjoint();
  const CompressionResult c = compress(pres, big, (p + p.adjoint()) * 0.5);
  const auto set = symmetric_generating_set(pres.num_generators());
  std::vector<GroupWord> sample;
  for (int i = 0; i < 4; ++i) {
    std::vector<Letter> letters;
    const int len = rng.uniform_int(0, 6);
    for (int l = 0; l < len; ++l) {
      letters.push_back({rng.uniform_int(0, pres.num_generators() - 1), rng.uniform() < 0.5 ? 1 : -1});
    }
    sample.emplace_back(std::move(letters));
  }
  const MultiplicativityAudit audit = approx_mult_audit(c.rep, set, sample, 1e-9, bound_scale);
  TrialOutcome out;
  out.ratio = audit.worst_ratio;
  out.passed = audit.passed;
  out.detail = "unitarity defect " + std::to_string(audit.eps) + ", bound " + std::to_string(audit.bound);
  return out;
}

/// ‖[χ(a), b]‖ ≤ ‖[a, b]‖ / (1 − 2δ).
inline TrialOutcome spectral_commutator_trial(CounterRng& rng, double bound_scale) {
  const Index n = detail::uniform_dim(rng, 2, 10);
  const double delta = rng.uniform(0.01, 0.45);
  std::vector<double> eig;
  for (Index i = 0; i < n; ++i) {
    eig.push_back(rng.uniform() < 0.5 ? rng.uniform(0.0, delta) : rng.uniform(1.0 - delta, 1.0));
  }
  const ComplexMatrix v = random_unitary(n, rng);
  RealVector d = Eigen::Map<RealVector>(eig.data(), n);
  const ComplexMatrix a = v * d.cast<Complex>().asDiagonal() * v.adjoint();
  ComplexMatrix b;
  if (rng.uniform() < 0.5) {
    b = random_ginibre(n, n, rng);
  } else {
    // nearly commuting with a: a polynomial in a plus a small perturbation
    b = a * a * Complex(rng.normal(), rng.normal()) + a * rng.normal() +
        rng.uniform(0.0, 0.05) * random_unit_direction(n, rng);
  }
  const CommutatorBoundCheck c = spectral_projection_commutator_check(a, b, delta, default_tolerances(), 1e-9, bound_scale);
  return {c.ratio, c.passed, "delta " + std::to_string(delta) + ", lhs " + std::to_string(c.lhs) + ", bound " +
                                 std::to_string(c.bound)};
}

/// Connecting unitary: u p u* = q and ‖[u, x]‖ ≤ 28ε.
inline TrialOutcome connecting_unitary_trial(CounterRng& rng, double bound_scale) {
  const Index n = detail::uniform_dim(rng, 2, 10);
  const Index r = detail::uniform_dim(rng, 1, static_cast<int>(n) - 1);
  const ComplexMatrix p = random_projection(n, r, rng);
  const ComplexMatrix w = detail::small_rotation(n, rng.uniform(0.0, 0.12), rng);
  ComplexMatrix q = w * p * w.adjoint();
  q = (q + q.adjoint()) * 0.5;
  std::vector<ComplexMatrix> x;
  const bool near = rng.uniform() < 0.5;
  for (int i = 0; i < 3; ++i) {
    if (near) {
      x.push_back(detail::unitary_commuting_with(p, rng) * detail::small_rotation(n, rng.uniform(0.0, 0.02), rng));
    } else {
      x.push_back(random_unitary(n, rng));
    }
  }
  const ProjectionPairContext ctx(p, q, x);
  const ConnectingUnitary cu = connecting_unitary(ctx, default_tolerances(), 1e-9, bound_scale);
  return {cu.audit.worst_ratio, cu.audit.passed,
          "eps " + std::to_string(ctx.eps) + ", conjugation error " + std::to_string(cu.audit.conjugation_error)};
}

/// Chained conjugation along a subdivided rotation path.
inline TrialOutcome chain_trial(CounterRng& rng, double bound_scale) {
  const Index n = detail::uniform_dim(rng, 2, 8);
  const Index r = detail::uniform_dim(rng, 1, static_cast<int>(n) - 1);
  const ComplexMatrix p0 = random_projection(n, r, rng);
  ComplexMatrix h = random_hermitian(n, rng);
  h /= op_norm(h);
  const double angle = rng.uniform(0.0, 1.5);
  const int steps = rng.uniform_int(1, 16);
  // consecutive projections differ by at most 2·angle/m, kept below 1/4
  const int m = std::max(steps, static_cast<int>(std::ceil(angle / 0.1)));
  std::vector<ComplexMatrix> path;
  for (int i = 0; i <= m; ++i) {
    const ComplexMatrix w = exp_i_hermitian(h, angle * i / m);
    ComplexMatrix pi = w * p0 * w.adjoint();
    path.push_back((pi + pi.adjoint()) * 0.5);
  }
  std::vector<ComplexMatrix> x;
  for (int i = 0; i < 2; ++i) {
    x.push_back(detail::unitary_commuting_with(p0, rng) * detail::small_rotation(n, rng.uniform(0.0, 0.02), rng));
  }
  const ChainConjugation c = chain_conjugation(path, x, default_tolerances(), bound_scale);
  return {c.audit.worst_ratio, c.audit.passed,
          std::to_string(c.steps) + " steps, eps_path " + std::to_string(c.eps_path) + ", endpoint error " +
              std::to_string(c.endpoint_error)};
}

inline std::vector<Suite> audit_suites() {
  return {
      {"unitarize", "6eps", 0x11,
       [](CounterRng& rng, double s) {
         const bool surface = rng.uniform() < 0.5;
         const double eps = rng.uniform() < 0.5 ? 0.01 : 0.1;
         return unitarize_trial(rng, s, surface, eps);
       }},
      {"ucp_multiplicativity", "sqrt(eps)", 0x22, ucp_extend_trial},
      {"spectral_projection_commutator", "1/(1-2delta)", 0x33, spectral_commutator_trial},
      {"connecting_unitary", "28eps", 0x44, connecting_unitary_trial},
      {"chain_conjugation", "28eps*steps", 0x55, chain_trial},
  };
}

inline std::uint64_t trial_key(std::uint64_t seed, const Suite& suite, std::size_t trial) {
  return CounterRng::derive(CounterRng::derive(seed, suite.salt), trial);
}

inline TrialOutcome run_trial(const Suite& suite, std::uint64_t seed, std::size_t trial, double bound_scale) {
  CounterRng rng(trial_key(seed, suite, trial));
  try {
    return suite.trial(rng, bound_scale);
  } catch (const Error& e) {
    return {INFINITY, false, e.what()};
  }
}

inline SuiteReport run_suite(const Suite& suite, const AuditOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<TrialOutcome> results(opt.trials);
  const unsigned workers = std::min<unsigned>(worker_count(opt.threads), static_cast<unsigned>(std::max<std::size_t>(opt.trials, 1)));
  auto work = [&](unsigned id) {
    for (std::size_t t = id; t < opt.trials; t += workers) results[t] = run_trial(suite, opt.seed, t, opt.bound_scale);
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
  }
  SuiteReport report;
  report.name = suite.name;
  report.constant = suite.constant;
  report.trials = opt.trials;
  for (std::size_t t = 0; t < results.size(); ++t) {
    report.worst_ratio = std::max(report.worst_ratio, results[t].ratio);
    if (!results[t].passed) {
      ++report.violations;
      report.failures.push_back({t, trial_key(opt.seed, suite, t), results[t].ratio, results[t].detail});
    }
  }
  report.passed = report.violations == 0;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace obstructkit
