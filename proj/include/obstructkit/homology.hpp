#pragma once

// Exact integer homology: Smith normal form over arbitrary-size integers,
// H₂ of free-by-cyclic groups and of surface mapping tori, and the count of
// winding-number obstructions for the supported group families.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "obstructkit/error.hpp"
#include "obstructkit/words.hpp"

namespace obstructkit {

using BigInt = boost::multiprecision::cpp_int;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorKind::InvalidSize, "ragged integer matrix");
      for (long v : r) data_.emplace_back(v);
    }
  }

  static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw Error(ErrorKind::InvalidSize, "ragged integer matrix");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::InvalidSize, "integer matrix product dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::InvalidSize, "dimension mismatch");
    IntMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
  }

  bool operator==(const IntMatrix&) const = default;

  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += factor · row[src]
  void add_row(std::size_t dst, std::size_t src, const BigInt& factor) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const BigInt& factor) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
inline BigInt determinant(const IntMatrix& a) {
  if (!a.square()) throw Error(ErrorKind::InvalidSize, "determinant needs a square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct SmithForm {
  IntMatrix u;  // rows × rows, unimodular
  IntMatrix d;  // U·A·V
  IntMatrix v;  // cols × cols, unimodular
  std::vector<BigInt> diagonal;  // nonzero invariant factors, d₁ | d₂ | …
};

/// U·A·V = D with D diagonal, nonnegative, and each diagonal entry dividing
/// the next. Pivots on the smallest nonzero absolute value.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  SmithForm f{IntMatrix::identity(a.rows()), a, IntMatrix::identity(a.cols()), {}};
  IntMatrix& d = f.d;
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  for (std::size_t s = 0; s < std::min(r, c); ++s) {
    for (;;) {
      std::size_t pi = r;
      std::size_t pj = c;
      BigInt best = 0;
      for (std::size_t i = s; i < r; ++i)
        for (std::size_t j = s; j < c; ++j) {
          const BigInt mag = abs(d(i, j));
          if (mag != 0 && (best == 0 || mag < best)) {
            best = mag;
            pi = i;
            pj = j;
          }
        }
      if (best == 0) return f;  // remaining block is zero
      if (pi != s) {
        d.swap_rows(s, pi);
        f.u.swap_rows(s, pi);
      }
      if (pj != s) {
        d.swap_cols(s, pj);
        f.v.swap_cols(s, pj);
      }
      bool clean = true;
      for (std::size_t i = s + 1; i < r; ++i) {
        if (d(i, s) == 0) continue;
        const BigInt q = d(i, s) / d(s, s);
        d.add_row(i, s, -q);
        f.u.add_row(i, s, -q);
        clean = clean && d(i, s) == 0;
      }
      for (std::size_t j = s + 1; j < c; ++j) {
        if (d(s, j) == 0) continue;
        const BigInt q = d(s, j) / d(s, s);
        d.add_col(j, s, -q);
        f.v.add_col(j, s, -q);
        clean = clean && d(s, j) == 0;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = s + 1; i < r && divides; ++i)
        for (std::size_t j = s + 1; j < c; ++j) {
          if (d(i, j) % d(s, s) != 0) {
            d.add_row(s, i, 1);
            f.u.add_row(s, i, 1);
            divides = false;
            break;
          }
        }
      if (divides) break;
    }
    if (d(s, s) < 0) {
      d.negate_row(s);
      f.u.negate_row(s);
    }
    f.diagonal.push_back(d(s, s));
  }
  return f;
}

inline std::size_t rank(const IntMatrix& a) { return smith_normal_form(a).diagonal.size(); }

struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;  // invariant factors ≥ 2, each dividing the next

  bool operator==(const AbelianGroup&) const = default;

  std::string render() const {
    std::vector<std::string> parts;
    if (free_rank == 1) parts.emplace_back("Z");
    if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
    for (const auto& t : torsion) parts.push_back("Z/" + t.str());
    if (parts.empty()) return "0";
    std::string out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out += " ⊕ " + parts[i];
    return out;
  }
};

/// Direct sum, renormalized to invariant-factor form.
inline AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
  std::vector<BigInt> t = a.torsion;
  t.insert(t.end(), b.torsion.begin(), b.torsion.end());
  IntMatrix diag(t.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) diag(i, i) = t[i];
  AbelianGroup out{a.free_rank + b.free_rank, {}};
  for (const auto& x : smith_normal_form(diag).diagonal) {
    if (x > 1) out.torsion.push_back(x);
  }
  return out;
}

/// ℤ^rows / image(A)
inline AbelianGroup cokernel(const IntMatrix& a) {
  const SmithForm f = smith_normal_form(a);
  AbelianGroup g{a.rows() - f.diagonal.size(), {}};
  for (const auto& x : f.diagonal) {
    if (x > 1) g.torsion.push_back(x);
  }
  return g;
}

/// ker(A) ⊂ ℤ^cols is free of rank cols − rank(A).
inline std::size_t kernel_rank(const IntMatrix& a) { return a.cols() - rank(a); }

/// H_k = ker(∂_k) / im(∂_{k+1}), boundary matrices acting on column vectors.
inline AbelianGroup chain_homology(const IntMatrix& boundary_k, const IntMatrix& boundary_k_plus_1) {
  if (boundary_k.cols() != boundary_k_plus_1.rows()) {
    throw Error(ErrorKind::InvalidSize, "boundary maps are not composable");
  }
  const SmithForm in = smith_normal_form(boundary_k_plus_1);
  AbelianGroup g{boundary_k.cols() - rank(boundary_k) - in.diagonal.size(), {}};
  for (const auto& x : in.diagonal) {
    if (x > 1) g.torsion.push_back(x);
  }
  return g;
}

inline void require_automorphism(const IntMatrix& m) {
  if (!m.square() || m.rows() == 0) throw Error(ErrorKind::InvalidSize, "expected a non-empty square matrix");
  const BigInt det = determinant(m);
  if (abs(det) != 1) throw Error(ErrorKind::NotAnAutomorphism, "matrix is not invertible over Z (det " + det.str() + ")");
}

inline IntMatrix identity_minus(const IntMatrix& m) { return IntMatrix::identity(m.rows()) - m; }

/// Coefficients c_0 … c_n of det(xI − A) (c_n = 1), Faddeev–LeVerrier with
/// exact integer division.
inline std::vector<BigInt> characteristic_polynomial(const IntMatrix& a) {
  if (!a.square()) throw Error(ErrorKind::InvalidSize, "characteristic polynomial needs a square matrix");
  const std::size_t n = a.rows();
  std::vector<BigInt> c(n + 1);
  c[n] = 1;
  IntMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix next = a * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    const IntMatrix am = a * m;
    BigInt tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

/// Multiplicity of 1 as a root of the characteristic polynomial.
inline std::size_t algebraic_multiplicity_of_one(const IntMatrix& a) {
  std::vector<BigInt> p = characteristic_polynomial(a);
  std::size_t mult = 0;
  while (p.size() > 1) {
    BigInt value = 0;
    for (const auto& coeff : p) value += coeff;
    if (value != 0) break;
    // synthetic division by (x − 1)
    std::vector<BigInt> q(p.size() - 1);
    BigInt carry = 0;
    for (std::size_t i = p.size() - 1; i >= 1; --i) {
      carry += p[i];
      q[i - 1] = carry;
    }
    p = std::move(q);
    ++mult;
  }
  return mult;
}

/// H₂ of F ⋊_φ ℤ from the action φ_* on H₁(F) = ℤⁿ: free abelian of rank
/// dim ker(1 − φ_*).
inline AbelianGroup free_by_cyclic_h2(const IntMatrix& phi_star) {
  require_automorphism(phi_star);
  return {kernel_rank(identity_minus(phi_star)), {}};
}

/// H₂ of the mapping torus of a surface map with degree `orientation_sign`
/// on H₂(S) and matrix M on H₁(S): coker(1 − d) ⊕ ℤ^{dim ker(1 − M)}.
inline AbelianGroup mapping_torus_surface_h2(int orientation_sign, const IntMatrix& m) {
  if (orientation_sign != 1 && orientation_sign != -1) {
    throw Error(ErrorKind::InvalidArgument, "orientation sign must be ±1");
  }
  if (!m.square() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw Error(ErrorKind::InvalidSize, "H1 action of a closed orientable surface is 2g×2g");
  }
  require_automorphism(m);
  IntMatrix top(1, 1);
  top(0, 0) = 1 - orientation_sign;
  return direct_sum(cokernel(top), AbelianGroup{kernel_rank(identity_minus(m)), {}});
}

/// Aᵀ J A == J, exactly.
inline bool symplectic_check(const IntMatrix& a, const IntMatrix& j) {
  if (!a.square() || !j.square() || a.rows() != j.rows()) {
    throw Error(ErrorKind::InvalidSize, "symplectic check needs square matrices of equal size");
  }
  return a.transpose() * j * a == j;
}

struct FreeByCyclicFamily {
  IntMatrix phi_star;
};
struct SurfaceFamily {
  int genus = 1;
  bool orientable = true;
};
struct BaumslagSolitarFamily {
  int n = 1;
  int m = 1;
};
using GroupFamily = std::variant<FreeByCyclicFamily, SurfaceFamily, BaumslagSolitarFamily>;

/// Number of independent winding-number obstructions: the free rank of H₂.
inline std::size_t obstruction_count(const GroupFamily& family) {
  return std::visit(
      [](const auto& f) -> std::size_t {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FreeByCyclicFamily>) {
          return free_by_cyclic_h2(f.phi_star).free_rank;
        } else if constexpr (std::is_same_v<T, SurfaceFamily>) {
          if (f.genus < 1) throw Error(ErrorKind::InvalidFamily, "surface genus must be at least 1");
          return f.orientable ? 1 : 0;
        } else {
          if (f.n == 0 || f.m == 0) throw Error(ErrorKind::InvalidFamily, "Baumslag-Solitar parameters must be nonzero");
          return f.n == f.m ? 1 : 0;
        }
      },
      family);
}

/// Relators lying in [F, F]; for one-relator presentations this is the
/// free rank of H₂.
inline std::size_t commutator_relator_count(const Presentation& p) {
  std::size_t count = 0;
  for (const auto& r : p.relators()) count += in_commutator_subgroup(r, p.num_generators()) ? 1 : 0;
  return count;
}

}  // namespace obstructkit
