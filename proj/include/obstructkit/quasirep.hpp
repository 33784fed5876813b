#pragma once

// Quasi-representations of finitely presented groups: defect measurement,
// unitarization, Gram-matrix ucp checks, compressions of honest
// representations, and the clock/shift witnesses.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "obstructkit/error.hpp"
#include "obstructkit/matcore.hpp"
#include "obstructkit/words.hpp"

namespace obstructkit {

enum class Flavor { General, Unitary, UcpCompression };

/// Value assigned to group elements that are neither generators nor listed
/// in the explicit value table.
enum class Extension { WordProduct, Identity };

struct CompressionData {
  std::vector<ComplexMatrix> big_rep;  // honest unitary images
  ComplexMatrix projection;
  ComplexMatrix isometry;              // columns: orthonormal basis of range(projection)
};

/// A unital map from the group into the unit ball of M_n(ℂ). Generator
/// images are stored directly; further group elements either come from the
/// value table (keyed by normal form), from the compression data, or from
/// the extension rule.
class QuasiRep {
 public:
  QuasiRep(Presentation presentation, std::vector<ComplexMatrix> images, Flavor flavor,
           NormalForm normal_form = NormalForm::Free, const Tolerances& tol = default_tolerances())
      : presentation_(std::move(presentation)),
        images_(std::move(images)),
        flavor_(flavor),
        normal_form_(normal_form),
        tol_(tol) {
    if (static_cast<int>(images_.size()) != presentation_.num_generators()) {
      throw Error(ErrorKind::InvalidSize, "need exactly one image per generator");
    }
    for (std::size_t g = 0; g < images_.size(); ++g) check_image(images_[g], g);
  }

  const Presentation& presentation() const { return presentation_; }
  const std::vector<ComplexMatrix>& images() const { return images_; }
  Flavor flavor() const { return flavor_; }
  NormalForm normal_form() const { return normal_form_; }
  Extension extension() const { return extension_; }
  const std::map<GroupWord, ComplexMatrix>& values() const { return values_; }
  const std::optional<CompressionData>& compression() const { return compression_; }
  const Tolerances& tolerances() const { return tol_; }
  Index dim() const { return images_.front().rows(); }

  InverseMode default_mode() const {
    return flavor_ == Flavor::General ? InverseMode::TrueInverse : InverseMode::Adjoint;
  }

  GroupWord normalize(const GroupWord& w) const {
    return obstructkit::normal_form(w, normal_form_, presentation_.num_generators());
  }

  /// Returns a copy whose value table is extended by `table` (keys are
  /// normalized first; single generators update the image list).
  QuasiRep with_values(const std::map<GroupWord, ComplexMatrix>& table, Extension extension) const {
    QuasiRep out = *this;
    out.extension_ = extension;
    for (const auto& [word, value] : table) {
      const GroupWord key = normalize(word);
      if (key.empty()) {
        if (!approx_equal(value, identity(dim()), tol_.spectral(dim()))) {
          throw Error(ErrorKind::InvalidMatrix, "quasi-representations are unital: identity element must map to 1");
        }
        continue;
      }
      out.check_image(value, 0);
      if (key.size() == 1 && key.letters()[0].exponent > 0) {
        out.images_[static_cast<std::size_t>(key.letters()[0].generator)] = value;
      } else {
        out.values_[key] = value;
      }
    }
    return out;
  }

  static QuasiRep from_compression(Presentation presentation, CompressionData data,
                                   const Tolerances& tol = default_tolerances()) {
    std::vector<ComplexMatrix> images;
    for (const auto& big : data.big_rep) images.push_back(data.isometry.adjoint() * big * data.isometry);
    QuasiRep out(std::move(presentation), std::move(images), Flavor::UcpCompression, NormalForm::Free, tol);
    out.compression_ = std::move(data);
    return out;
  }

  /// φ(g) for the group element represented by w.
  ComplexMatrix evaluate(const GroupWord& w, std::optional<InverseMode> mode = std::nullopt) const {
    const GroupWord key = normalize(w);
    if (compression_) {
      const auto& c = *compression_;
      return c.isometry.adjoint() * word_matrix(key, c.big_rep, InverseMode::Adjoint, tol_) * c.isometry;
    }
    if (key.empty()) return identity(dim());
    if (key.size() == 1 && key.letters()[0].exponent > 0) {
      return images_[static_cast<std::size_t>(key.letters()[0].generator)];
    }
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    if (extension_ == Extension::Identity) return identity(dim());
    return word_matrix(key, images_, mode.value_or(default_mode()), tol_);
  }

 private:
  void check_image(const ComplexMatrix& m, std::size_t g) const {
    require_valid(m, "quasi-representation value");
    if (m.rows() != images_.front().rows()) throw Error(ErrorKind::InvalidSize, "values have different dimensions");
    // For unitary values ‖m‖² = ‖m*m‖ ≤ 1 + ud, which usually settles the
    // unit-ball check without a separate norm.
    const double ud = flavor_ == Flavor::Unitary ? unitarity_defect(m) : INFINITY;
    if (std::sqrt(1.0 + ud) > 1.0 + 1e-10) {
      const double norm = op_norm(m);
      if (norm > 1.0 + 1e-10) throw Error(ErrorKind::InvalidMatrix, "value outside the unit ball", norm, g);
    }
    if (ud > tol_.unitarity && flavor_ == Flavor::Unitary) {
      throw Error(ErrorKind::NotUnitary, "unitary flavor needs unitary values", ud, g);
    }
  }

  Presentation presentation_;
  std::vector<ComplexMatrix> images_;
  Flavor flavor_;
  NormalForm normal_form_;
  Extension extension_ = Extension::WordProduct;
  std::map<GroupWord, ComplexMatrix> values_;
  std::optional<CompressionData> compression_;
  Tolerances tol_;
};

/// Generators followed by their inverses.
inline std::vector<GroupWord> symmetric_generating_set(int num_generators) {
  std::vector<GroupWord> s;
  for (int g = 0; g < num_generators; ++g) s.push_back(GroupWord::generator(g));
  for (int g = 0; g < num_generators; ++g) s.push_back(GroupWord::generator(g, -1));
  return s;
}

struct PairDefect {
  GroupWord s;
  GroupWord t;
  double value = 0.0;  // ‖φ(s)φ(t) − φ(st)‖
};

struct DefectReport {
  std::vector<PairDefect> pair_defects;
  double max_defect = 0.0;
  double unitarity_defect = 0.0;  // max over s ∈ S
};

/// Multiplicativity defect over all ordered pairs from S.
inline DefectReport defect(const QuasiRep& phi, const std::vector<GroupWord>& set,
                           std::optional<InverseMode> mode = std::nullopt) {
  DefectReport report;
  std::vector<ComplexMatrix> vals;
  vals.reserve(set.size());
  for (const auto& s : set) vals.push_back(phi.evaluate(s, mode));
  for (std::size_t i = 0; i < set.size(); ++i) {
    report.unitarity_defect = std::max(report.unitarity_defect, unitarity_defect(vals[i]));
    for (std::size_t j = 0; j < set.size(); ++j) {
      const double d = op_norm(vals[i] * vals[j] - phi.evaluate(set[i] * set[j], mode));
      report.pair_defects.push_back({set[i], set[j], d});
      report.max_defect = std::max(report.max_defect, d);
    }
  }
  return report;
}

/// Unitary-valued quasi-representation close to φ on S. Polar parts on S,
/// products l(t)r(t) on S²∖(S∪{e}) with (l, r) the first factorization in
/// the order of S, identity elsewhere. Requires defect(φ, S) < ε < 1; then
/// the output is within ε of φ on S and has defect below 6ε.
inline QuasiRep unitarize(const QuasiRep& phi, const std::vector<GroupWord>& set, double eps,
                          std::optional<InverseMode> mode = std::nullopt) {
  if (!(eps > 0.0) || eps >= 1.0) throw Error(ErrorKind::BoundViolation, "need 0 < eps < 1", eps);
  std::vector<GroupWord> keys;
  std::set<GroupWord> key_set;
  for (const auto& s : set) {
    keys.push_back(phi.normalize(s));
    key_set.insert(keys.back());
  }
  for (const auto& s : set) {
    if (!key_set.count(phi.normalize(s.inverse()))) {
      throw Error(ErrorKind::AsymmetricSet, "S is not closed under inversion: missing inverse of " +
                                                phi.presentation().format(s));
    }
  }
  const DefectReport pre = defect(phi, set, mode);
  if (pre.max_defect >= eps) {
    throw Error(ErrorKind::BoundViolation, "defect of input on S is not below eps", pre.max_defect);
  }

  std::map<GroupWord, ComplexMatrix> table;
  const Index dim = phi.dim();
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (keys[i].empty() || table.count(keys[i])) continue;
    table[keys[i]] = polar_unitary(phi.evaluate(set[i], mode), phi.tolerances());
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = 0; j < set.size(); ++j) {
      const GroupWord t = phi.normalize(set[i] * set[j]);
      if (t.empty() || key_set.count(t) || table.count(t)) continue;
      table[t] = table.at(keys[i]) * table.at(keys[j]);
    }
  }
  // Generators outside S ∪ S² map to the identity.
  std::vector<ComplexMatrix> images(static_cast<std::size_t>(phi.presentation().num_generators()), identity(dim));
  QuasiRep sigma(phi.presentation(), std::move(images), Flavor::Unitary, phi.normal_form(), phi.tolerances());
  return sigma.with_values(table, Extension::Identity);
}

struct GramCheck {
  double min_eigenvalue = 0.0;
  double asymmetry = 0.0;  // ‖G − G*‖; a positive matrix has zero asymmetry
};

/// Smallest eigenvalue of the block matrix [φ(g⁻¹h)]_{g,h ∈ F}. A value
/// ≥ −tol certifies positivity of φ restricted to F.
inline GramCheck ucp_gram_check(const QuasiRep& phi, const std::vector<GroupWord>& f,
                                std::optional<InverseMode> mode = std::nullopt) {
  const Index d = phi.dim();
  const auto m = static_cast<Index>(f.size());
  ComplexMatrix gram(m * d, m * d);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      gram.block(i * d, j * d, d, d) =
          phi.evaluate(f[static_cast<std::size_t>(i)].inverse() * f[static_cast<std::size_t>(j)], mode);
    }
  }
  GramCheck out;
  out.asymmetry = op_norm(gram - gram.adjoint());
  const ComplexMatrix sym = (gram + gram.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues()(0);
  return out;
}

struct CompressionResult {
  QuasiRep rep;
  DefectReport defect;
  double commutator_bound = 0.0;  // max_g ‖[p, π(g)]‖
};

/// g ↦ p π(g) p on range(p), for an honest unitary representation π.
inline CompressionResult compress(const Presentation& presentation, const std::vector<ComplexMatrix>& big_rep,
                                  const ComplexMatrix& p, const Tolerances& tol = default_tolerances()) {
  require_valid(p, "projection");
  const Index big = p.rows();
  const double pd = projection_defect(p);
  if (pd > tol.spectral(big)) throw Error(ErrorKind::NotProjection, "p is not a projection", pd);
  if (static_cast<int>(big_rep.size()) != presentation.num_generators()) {
    throw Error(ErrorKind::InvalidSize, "need exactly one image per generator");
  }
  for (std::size_t g = 0; g < big_rep.size(); ++g) {
    require_valid(big_rep[g], "representation image");
    if (big_rep[g].rows() != big) throw Error(ErrorKind::InvalidSize, "representation and projection dims differ");
    const double ud = unitarity_defect(big_rep[g]);
    if (ud > tol.spectral(big)) throw Error(ErrorKind::NotUnitary, "representation image not unitary", ud, g);
  }
  for (std::size_t r = 0; r < presentation.relators().size(); ++r) {
    const double rd = op_norm(word_matrix(presentation.relators()[r], big_rep, InverseMode::Adjoint, tol) - identity(big));
    if (rd > tol.spectral(big)) {
      throw Error(ErrorKind::HypothesisViolation, "representation does not satisfy relator", rd, r);
    }
  }
  const HermitianSpectrum spec = hermitian_spectrum(p, tol);
  std::vector<Index> cols;
  for (Index i = 0; i < spec.eigenvalues.size(); ++i) {
    if (spec.eigenvalues(i) > 0.5) cols.push_back(i);
  }
  if (cols.empty()) throw Error(ErrorKind::InvalidSize, "projection has rank zero");
  ComplexMatrix v(big, static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) v.col(static_cast<Index>(c)) = spec.eigenvectors.col(cols[c]);

  double bound = 0.0;
  for (const auto& g : big_rep) bound = std::max(bound, op_norm(commutator(p, g)));
  QuasiRep rep = QuasiRep::from_compression(presentation, CompressionData{big_rep, p, v}, tol);
  DefectReport d = defect(rep, symmetric_generating_set(presentation.num_generators()));
  return {std::move(rep), std::move(d), bound};
}

struct MultiplicativityEntry {
  GroupWord g;
  GroupWord s;
  double left = 0.0;   // ‖φ(gs) − φ(g)φ(s)‖
  double right = 0.0;  // ‖φ(sg) − φ(s)φ(g)‖
  bool passed = true;
};

struct MultiplicativityAudit {
  double eps = 0.0;    // unitarity defect of φ on S
  double bound = 0.0;  // √eps
  std::vector<MultiplicativityEntry> entries;
  double worst_ratio = 0.0;
  bool passed = true;
};

/// Checks ‖φ(gs) − φ(g)φ(s)‖ ≤ √ε and ‖φ(sg) − φ(s)φ(g)‖ ≤ √ε, where ε is
/// the unitarity defect of φ on S. Violations are recorded, not thrown.
inline MultiplicativityAudit approx_mult_audit(const QuasiRep& phi, const std::vector<GroupWord>& set,
                                               const std::vector<GroupWord>& sample, double slack = 1e-9,
                                               double bound_scale = 1.0) {
  if (phi.flavor() != Flavor::UcpCompression) {
    throw Error(ErrorKind::HypothesisViolation, "multiplicativity audit applies to compressions");
  }
  MultiplicativityAudit audit;
  std::vector<ComplexMatrix> svals;
  for (const auto& s : set) {
    svals.push_back(phi.evaluate(s));
    audit.eps = std::max(audit.eps, unitarity_defect(svals.back()));
  }
  if (audit.eps >= 1.0) throw Error(ErrorKind::BoundViolation, "unitarity defect on S must be below 1", audit.eps);
  audit.bound = bound_scale * std::sqrt(audit.eps);
  for (const auto& g : sample) {
    const ComplexMatrix pg = phi.evaluate(g);
    for (std::size_t i = 0; i < set.size(); ++i) {
      MultiplicativityEntry e{g, set[i]};
      e.left = op_norm(phi.evaluate(g * set[i]) - pg * svals[i]);
      e.right = op_norm(phi.evaluate(set[i] * g) - svals[i] * pg);
      const double worst = std::max(e.left, e.right);
      e.passed = worst <= audit.bound + slack;
      audit.passed = audit.passed && e.passed;
      audit.worst_ratio = std::max(audit.worst_ratio, audit.bound > 0.0 ? worst / audit.bound : (worst > slack ? INFINITY : 0.0));
      audit.entries.push_back(std::move(e));
    }
  }
  return audit;
}

/// u = diag(1, ω, …, ω^{n−1}), v = cyclic shift, ω = e^{2πi/n}; uv = ω vu.
inline std::pair<ComplexMatrix, ComplexMatrix> clock_shift(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidSize, "clock/shift needs n >= 2");
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  ComplexMatrix v = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    u(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    v((j + 1) % n, j) = 1.0;
  }
  return {u, v};
}

/// Smallest n ≥ 2 with 2 sin(π/n) < min(δ, 1).
inline int clock_shift_size_for(double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidSize, "delta must be positive", delta);
  const double target = std::min(delta, 1.0);
  int n = 2;
  while (2.0 * std::sin(std::numbers::pi / n) >= target) ++n;
  return n;
}

/// Unitary pair with ‖uv − vu‖ < δ and winding number k: |k| copies of
/// clock/shift (each contributing −1), with u and v swapped when k > 0, and
/// a single 1×1 commuting block when k = 0.
inline std::pair<ComplexMatrix, ComplexMatrix> voiculescu_pair(double delta, int k) {
  const int n = clock_shift_size_for(delta);
  if (k == 0) return {identity(1), identity(1)};
  auto [u0, v0] = clock_shift(n);
  if (k > 0) std::swap(u0, v0);
  ComplexMatrix u = u0;
  ComplexMatrix v = v0;
  for (int i = 1; i < std::abs(k); ++i) {
    u = block_sum(u, u0);
    v = block_sum(v, v0);
  }
  return {u, v};
}

}  // namespace obstructkit
