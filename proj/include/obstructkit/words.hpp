#pragma once

// Free-group word calculus over a finite presentation.
//
// Text format: a lowercase letter is a generator, the matching uppercase
// letter its inverse ("abAB" is aba⁻¹b⁻¹). Presentations whose generator
// names are not single lowercase letters use whitespace-separated tokens
// with an optional "^-1" suffix.

#include <algorithm>
#include <cctype>
#include <compare>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "obstructkit/error.hpp"
#include "obstructkit/matcore.hpp"

namespace obstructkit {

struct Letter {
  int generator = 0;
  int exponent = 1;  // +1 or -1

  Letter inverse() const { return {generator, -exponent}; }
  auto operator<=>(const Letter&) const = default;
};

class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
    for (const Letter& l : letters_) {
      if (l.exponent != 1 && l.exponent != -1) throw Error(ErrorKind::Parse, "letter exponent must be ±1");
      if (l.generator < 0) throw Error(ErrorKind::Parse, "negative generator index");
    }
  }

  static GroupWord generator(int g, int exponent = 1) { return GroupWord({Letter{g, exponent}}); }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  GroupWord inverse() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
    return GroupWord(std::move(out));
  }

  /// Free reduction: cancels adjacent x x⁻¹ pairs until none remain.
  GroupWord reduced() const {
    std::vector<Letter> stack;
    stack.reserve(letters_.size());
    for (const Letter& l : letters_) {
      if (!stack.empty() && stack.back() == l.inverse()) {
        stack.pop_back();
      } else {
        stack.push_back(l);
      }
    }
    return GroupWord(std::move(stack));
  }

  bool is_reduced() const {
    for (std::size_t i = 1; i < letters_.size(); ++i) {
      if (letters_[i] == letters_[i - 1].inverse()) return false;
    }
    return true;
  }

  friend GroupWord operator*(const GroupWord& a, const GroupWord& b) {
    std::vector<Letter> out = a.letters_;
    out.insert(out.end(), b.letters_.begin(), b.letters_.end());
    return GroupWord(std::move(out));
  }

  GroupWord power(int n) const {
    const GroupWord base = n >= 0 ? *this : inverse();
    GroupWord out;
    for (int i = 0; i < std::abs(n); ++i) out = out * base;
    return out;
  }

  auto operator<=>(const GroupWord&) const = default;

 private:
  std::vector<Letter> letters_;
};

inline GroupWord reduce(const GroupWord& w) { return w.reduced(); }

/// a b a⁻¹ b⁻¹
inline GroupWord commutator(const GroupWord& a, const GroupWord& b) { return a * b * a.inverse() * b.inverse(); }

/// Signed letter count per generator. Zero exactly when w lies in [F, F].
inline std::vector<long> exponent_sums(const GroupWord& w, int num_generators) {
  std::vector<long> sums(static_cast<std::size_t>(num_generators), 0);
  for (const Letter& l : w.letters()) {
    if (l.generator >= num_generators) throw Error(ErrorKind::Parse, "letter uses undeclared generator");
    sums[static_cast<std::size_t>(l.generator)] += l.exponent;
  }
  return sums;
}

inline bool in_commutator_subgroup(const GroupWord& w, int num_generators) {
  const auto sums = exponent_sums(w, num_generators);
  return std::all_of(sums.begin(), sums.end(), [](long s) { return s == 0; });
}

class Presentation {
 public:
  Presentation() = default;
  Presentation(std::vector<std::string> generator_names, std::vector<GroupWord> relators)
      : names_(std::move(generator_names)), relators_(std::move(relators)) {
    if (names_.empty()) throw Error(ErrorKind::Parse, "presentation needs at least one generator");
    std::set<std::string> seen;
    for (const auto& n : names_) {
      if (n.empty()) throw Error(ErrorKind::Parse, "empty generator name");
      if (!seen.insert(n).second) throw Error(ErrorKind::Parse, "duplicate generator name '" + n + "'");
    }
    for (const auto& r : relators_) {
      for (const Letter& l : r.letters()) {
        if (l.generator >= num_generators()) throw Error(ErrorKind::Parse, "relator uses undeclared generator");
      }
    }
  }

  int num_generators() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& generator_names() const { return names_; }
  const std::vector<GroupWord>& relators() const { return relators_; }

  bool single_letter_names() const {
    return std::all_of(names_.begin(), names_.end(), [](const std::string& n) {
      return n.size() == 1 && std::islower(static_cast<unsigned char>(n[0]));
    });
  }

  GroupWord parse(const std::string& text) const {
    std::vector<Letter> letters;
    if (single_letter_names()) {
      for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        const int g = index_of(std::string(1, lower));
        if (g < 0) throw Error(ErrorKind::Parse, std::string("unknown generator letter '") + c + "'");
        letters.push_back({g, std::isupper(static_cast<unsigned char>(c)) ? -1 : 1});
      }
    } else {
      std::istringstream in(text);
      std::string tok;
      while (in >> tok) {
        int exponent = 1;
        if (tok.size() > 3 && tok.ends_with("^-1")) {
          exponent = -1;
          tok.resize(tok.size() - 3);
        }
        const int g = index_of(tok);
        if (g < 0) throw Error(ErrorKind::Parse, "unknown generator '" + tok + "'");
        letters.push_back({g, exponent});
      }
    }
    return GroupWord(std::move(letters));
  }

  std::string format(const GroupWord& w) const {
    std::string out;
    const bool compact = single_letter_names();
    for (const Letter& l : w.letters()) {
      if (l.generator >= num_generators()) throw Error(ErrorKind::Parse, "letter uses undeclared generator");
      const std::string& name = names_[static_cast<std::size_t>(l.generator)];
      if (compact) {
        out += l.exponent > 0 ? name[0] : static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
      } else {
        if (!out.empty()) out += ' ';
        out += name;
        if (l.exponent < 0) out += "^-1";
      }
    }
    return out;
  }

  int index_of(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
  }

 private:
  std::vector<std::string> names_;
  std::vector<GroupWord> relators_;
};

inline std::vector<std::string> letter_names(int n) {
  if (n < 1 || n > 26) throw Error(ErrorKind::InvalidFamily, "need between 1 and 26 generators");
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.emplace_back(1, static_cast<char>('a' + i));
  return names;
}

/// ⟨a₁,b₁,…,a_g,b_g | ∏[a_i,b_i]⟩ with letters a,b,c,d,… (orientable) or
/// ⟨a₁,…,a_g | a₁²⋯a_g²⟩ (non-orientable).
inline Presentation surface_presentation(int genus, bool orientable) {
  if (genus < 1) throw Error(ErrorKind::InvalidFamily, "surface genus must be at least 1");
  if (orientable) {
    GroupWord rel;
    for (int i = 0; i < genus; ++i) rel = rel * commutator(GroupWord::generator(2 * i), GroupWord::generator(2 * i + 1));
    return Presentation(letter_names(2 * genus), {rel});
  }
  GroupWord rel;
  for (int i = 0; i < genus; ++i) rel = rel * GroupWord::generator(i).power(2);
  return Presentation(letter_names(genus), {rel});
}

/// ⟨a, b | a bⁿ a⁻¹ b⁻ᵐ⟩
inline Presentation baumslag_solitar_presentation(int n, int m) {
  if (n == 0 || m == 0) throw Error(ErrorKind::InvalidFamily, "Baumslag-Solitar parameters must be nonzero");
  const GroupWord a = GroupWord::generator(0);
  const GroupWord b = GroupWord::generator(1);
  return Presentation(letter_names(2), {a * b.power(n) * a.inverse() * b.power(-m)});
}

/// ℤᵏ = ⟨x₁…x_k | [x_i, x_j]⟩
inline Presentation free_abelian_presentation(int k) {
  std::vector<GroupWord> rels;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) rels.push_back(commutator(GroupWord::generator(i), GroupWord::generator(j)));
  }
  return Presentation(letter_names(k), rels);
}

struct CommutatorDecomposition {
  std::vector<std::pair<GroupWord, GroupWord>> pairs;
  GroupWord witness_product;  // ∏[a_i, b_i], unreduced
};

inline GroupWord commutator_product(const std::vector<std::pair<GroupWord, GroupWord>>& pairs) {
  GroupWord out;
  for (const auto& [a, b] : pairs) out = out * commutator(a, b);
  return out;
}

/// Writes w ∈ [F, F] as a product of commutators. Repeatedly splits the
/// reduced word as x·A·x⁻¹·B with x its first letter, records [x, A], and
/// continues with A·B, which is two letters shorter. No minimality claim.
inline CommutatorDecomposition commutator_decompose(const GroupWord& w, int num_generators) {
  if (!in_commutator_subgroup(w, num_generators)) {
    throw Error(ErrorKind::NotInCommutatorSubgroup, "word has nonzero exponent sum");
  }
  CommutatorDecomposition out;
  GroupWord rest = w.reduced();
  while (!rest.empty()) {
    const auto& ls = rest.letters();
    const Letter x = ls.front();
    const auto partner = std::find(ls.begin() + 1, ls.end(), x.inverse());
    if (partner == ls.end()) {
      throw Error(ErrorKind::NumericalInconsistency, "exponent-sum-zero word without matching inverse letter");
    }
    GroupWord inner(std::vector<Letter>(ls.begin() + 1, partner));
    GroupWord tail(std::vector<Letter>(partner + 1, ls.end()));
    out.pairs.emplace_back(GroupWord({x}), inner);
    rest = (inner * tail).reduced();
  }
  out.witness_product = commutator_product(out.pairs);
  return out;
}

/// How words are identified with group elements when a quasi-representation
/// is evaluated. Free: free reduction only (exact for words of length ≤ 2 in
/// surface groups of genus ≥ 2 and in free groups). Abelian: exponent vector,
/// exact for free abelian groups.
enum class NormalForm { Free, Abelian };

inline GroupWord normal_form(const GroupWord& w, NormalForm kind, int num_generators) {
  if (kind == NormalForm::Free) return w.reduced();
  const auto sums = exponent_sums(w, num_generators);
  GroupWord out;
  for (int g = 0; g < num_generators; ++g) {
    out = out * GroupWord::generator(g).power(static_cast<int>(sums[static_cast<std::size_t>(g)]));
  }
  return out;
}

enum class InverseMode { Adjoint, TrueInverse };

/// Left-to-right product of generator images along the word; inverse letters
/// become adjoints (unitary images) or matrix inverses.
inline ComplexMatrix word_matrix(const GroupWord& w, const std::vector<ComplexMatrix>& images, InverseMode mode,
                                 const Tolerances& tol = default_tolerances()) {
  if (images.empty()) throw Error(ErrorKind::InvalidSize, "no generator images");
  const Index dim = images.front().rows();
  for (const auto& m : images) {
    require_valid(m, "generator image");
    if (m.rows() != dim) throw Error(ErrorKind::InvalidSize, "generator images have different dimensions");
  }
  std::vector<char> needs_inverse(images.size(), 0);
  for (const Letter& l : w.letters()) {
    if (l.generator >= static_cast<int>(images.size())) throw Error(ErrorKind::InvalidSize, "letter without image");
    if (l.exponent < 0) needs_inverse[static_cast<std::size_t>(l.generator)] = 1;
  }
  std::vector<ComplexMatrix> inverses(images.size());
  for (std::size_t g = 0; g < images.size(); ++g) {
    if (!needs_inverse[g]) continue;
    if (mode == InverseMode::Adjoint) {
      const double ud = unitarity_defect(images[g]);
      if (ud > tol.unitarity) throw Error(ErrorKind::NotUnitary, "adjoint mode needs unitary images", ud, g);
      inverses[g] = images[g].adjoint();
    } else {
      const double smin = min_singular_value(images[g]);
      if (smin <= tol.singularity) throw Error(ErrorKind::NotInvertible, "image is not invertible", smin, g);
      inverses[g] = images[g].partialPivLu().inverse();
    }
  }
  ComplexMatrix out = identity(dim);
  for (const Letter& l : w.letters()) {
    const auto g = static_cast<std::size_t>(l.generator);
    out = out * (l.exponent > 0 ? images[g] : inverses[g]);
  }
  return out;
}

}  // namespace obstructkit
