#pragma once

// Eta and relative eta invariants of the circle operator i d/dx twisted by
// characters. The twisted spectrum is {n + q : n ∈ ℤ} (scale dropped; eta
// only sees signs). Closed form: η = 1 − 2q and trivial kernel for
// 0 < q < 1, η = 0 and one-dimensional kernel for q = 0.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "obstructkit/error.hpp"

namespace obstructkit {

struct CharacterTwist {
  double q = 0.0;

  explicit CharacterTwist(double phase) : q(phase) {
    if (!(q >= 0.0 && q < 1.0)) throw Error(ErrorKind::InvalidArgument, "character phase must lie in [0, 1)", q);
  }
};

/// Exact rational phase num/den in [0, 1).
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction make(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw Error(ErrorKind::InvalidArgument, "denominator must be positive");
    std::int64_t r = num % den;
    if (r < 0) r += den;
    const std::int64_t g = std::gcd(r, den);
    return {r / g, den / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction&) const = default;
};

inline Fraction add_mod1(const Fraction& a, const Fraction& b) {
  const std::int64_t l = std::lcm(a.den, b.den);
  return Fraction::make(a.num * (l / a.den) + b.num * (l / b.den), l);
}

enum class EtaMethod { ClosedForm, AbelRegularized };

inline std::string to_string(EtaMethod m) { return m == EtaMethod::ClosedForm ? "closed-form" : "abel-regularized"; }

struct EtaResult {
  double eta = 0.0;
  int kernel_dim = 0;
  double rho_mod_z = 0.0;  // in [0, 1)
  EtaMethod method = EtaMethod::ClosedForm;
  double extrapolation_error = 0.0;
  std::optional<Fraction> rho_exact;
};

inline double mod1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

inline EtaResult eta_character_closed(const CharacterTwist& tw) {
  EtaResult r;
  r.method = EtaMethod::ClosedForm;
  if (tw.q == 0.0) {
    r.eta = 0.0;
    r.kernel_dim = 1;
  } else {
    r.eta = 1.0 - 2.0 * tw.q;
    r.kernel_dim = 0;
  }
  return r;
}

/// Σ_{n ∈ ℤ} sign(n + q) e^{−t|n + q|}, truncated symmetrically once the
/// geometric tail is below 1e−14. Terms are added smallest first.
inline double abel_signed_sum(double q, double t) {
  const double tail = 1e-14;
  const auto n_max = static_cast<long>(std::ceil((std::log(1.0 / tail) - std::log1p(-std::exp(-t))) / t)) + 1;
  double positive = 0.0;
  double negative = 0.0;
  for (long n = n_max; n >= 0; --n) positive += std::exp(-t * (static_cast<double>(n) + q));
  for (long m = n_max; m >= 1; --m) negative += std::exp(-t * (static_cast<double>(m) - q));
  return positive - negative;
}

inline const std::vector<double>& default_t_ladder() {
  static const std::vector<double> ladder{0.4, 0.2, 0.1, 0.05, 0.025};
  return ladder;
}

namespace detail {

/// Value at 0 of the interpolating polynomial through (x_i, y_i).
inline double neville_at_zero(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      y[i] = (x[i + k] * y[i] - x[i] * y[i + 1]) / (x[i + k] - x[i]);
    }
  }
  return y[0];
}

}  // namespace detail

/// Richardson extrapolation t → 0 of a sampled regulator E(t): the order-m
/// estimate uses the m + 1 smallest ladder points; the error estimate is the
/// change from the order m − 1 estimate.
inline std::pair<double, double> richardson_to_zero(const std::vector<double>& ladder, const std::vector<double>& values,
                                                    int order) {
  if (order < 1 || ladder.size() < static_cast<std::size_t>(order) + 1 || ladder.size() != values.size()) {
    throw Error(ErrorKind::InvalidArgument, "ladder needs at least order + 1 points");
  }
  auto take = [&](std::size_t count, const std::vector<double>& v) {
    return std::vector<double>(v.end() - static_cast<long>(count), v.end());
  };
  const double hi = detail::neville_at_zero(take(order + 1, ladder), take(order + 1, values));
  const double lo = detail::neville_at_zero(take(order, ladder), take(order, values));
  return {hi, std::abs(hi - lo)};
}

inline void check_ladder(const std::vector<double>& ladder) {
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0 && ladder[i] <= 1.0)) throw Error(ErrorKind::InvalidArgument, "ladder entries must lie in (0, 1]");
    if (i > 0 && !(ladder[i] < ladder[i - 1])) throw Error(ErrorKind::InvalidArgument, "ladder must be descending");
  }
}

inline EtaResult eta_character_abel(const CharacterTwist& tw, const std::vector<double>& ladder = default_t_ladder(),
                                    int richardson_order = 4) {
  if (tw.q == 0.0) {
    throw Error(ErrorKind::ZeroMode, "q = 0 has a zero eigenvalue; use the closed form");
  }
  check_ladder(ladder);
  std::vector<double> values;
  for (double t : ladder) values.push_back(abel_signed_sum(tw.q, t));
  const auto [eta, err] = richardson_to_zero(ladder, values, richardson_order);
  EtaResult r;
  r.method = EtaMethod::AbelRegularized;
  r.eta = eta;
  r.kernel_dim = 0;
  r.extrapolation_error = err;
  r.rho_mod_z = mod1(((r.kernel_dim + r.eta) - 1.0) / 2.0);
  return r;
}

/// Abel-regularized eta of the merged spectrum ⋃_j {n + q_j}; zero modes
/// (q_j = 0, n = 0) are counted in kernel_dim and excluded from the sum.
inline EtaResult eta_spectrum_abel(const std::vector<double>& phases,
                                   const std::vector<double>& ladder = default_t_ladder(), int richardson_order = 4) {
  check_ladder(ladder);
  EtaResult r;
  r.method = EtaMethod::AbelRegularized;
  std::vector<double> values(ladder.size(), 0.0);
  for (double q : phases) {
    const CharacterTwist tw(q);
    if (q == 0.0) {
      ++r.kernel_dim;  // the remaining spectrum ℤ∖{0} is symmetric
      continue;
    }
    for (std::size_t i = 0; i < ladder.size(); ++i) values[i] += abel_signed_sum(q, ladder[i]);
  }
  const auto [eta, err] = richardson_to_zero(ladder, values, richardson_order);
  r.eta = eta;
  r.extrapolation_error = err;
  return r;
}

/// ρ = ((k_σ + η_σ) − (k_1 + η_1)) / 2 mod 1, which is −q mod 1.
inline EtaResult rho_character(const CharacterTwist& tw) {
  EtaResult twisted = eta_character_closed(tw);
  const EtaResult trivial = eta_character_closed(CharacterTwist(0.0));
  twisted.rho_mod_z = mod1(((twisted.kernel_dim + twisted.eta) - (trivial.kernel_dim + trivial.eta)) / 2.0);
  return twisted;
}

/// Exact form of ρ for a rational phase: (1 − 2q − 1)/2 = −q.
inline Fraction rho_character_exact(const Fraction& q) { return Fraction::make(-q.num, q.den); }

/// Σ_j ρ(q_j) mod 1 for the character decomposition of a loop's image.
inline double rho_loop(const std::vector<double>& phases) {
  double total = 0.0;
  for (double q : phases) total += rho_character(CharacterTwist(q)).rho_mod_z;
  return mod1(total);
}

inline Fraction rho_loop_exact(const std::vector<Fraction>& phases) {
  Fraction total{0, 1};
  for (const auto& q : phases) total = add_mod1(total, rho_character_exact(q));
  return total;
}

/// ρ as an element m of ℤ/n (ρ = m/n) when every phase denominator divides n.
inline std::optional<std::int64_t> rho_loop_zn(const std::vector<Fraction>& phases, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  for (const auto& q : phases) {
    if (n % q.den != 0) return std::nullopt;
  }
  const Fraction rho = rho_loop_exact(phases);
  return rho.num * (n / rho.den);
}

}  // namespace obstructkit
