#pragma once

// Complete elliptic integrals at imaginary modulus, the digamma-weighted
// series that carry their small-argument expansions, and the zeroth-mode
// functions A0, B0 (plus A_k, B_k by quadrature).
//
// Conventions: K(z) = int_0^{pi/2} (1 - z^2 sin^2 phi)^{-1/2} dphi and
// E(z) = int_0^{pi/2} (1 - z^2 sin^2 phi)^{1/2} dphi, so at z = i*kappa the
// integrands are (1 + kappa^2 sin^2 phi)^{-/+1/2} and everything stays real.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "nprev/errors.hpp"
#include "nprev/quadrature.hpp"

namespace nprev {

template <std::floating_point Scalar>
struct EllipticPair {
  Scalar k_val;
  Scalar e_val;
};

namespace detail {

template <std::floating_point Scalar>
void require_finite_nonneg(Scalar x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
  if (x < 0) throw DomainError(std::string(what) + ": negative argument");
}

// AGM for the standard-modulus pair (K(k), E(k)) given k^2 = m and
// k' = sqrt(1 - m) supplied separately so that m -> 1 loses nothing.
template <std::floating_point Scalar>
EllipticPair<Scalar> agm_standard(Scalar k, Scalar kprime) {
  constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar a = 1, b = kprime, c = k;
  Scalar sum = c * c / 2;
  Scalar scale = Scalar(0.5);
  for (int it = 0; it < 64; ++it) {
    const Scalar an = (a + b) / 2;
    const Scalar bn = std::sqrt(a * b);
    c = (a - b) / 2;
    a = an;
    b = bn;
    scale *= 2;
    sum += scale * c * c;
    if (std::abs(c) <= eps * a) break;
  }
  const Scalar kk = std::numbers::pi_v<Scalar> / (2 * a);
  return {kk, kk * (1 - sum)};
}

}  // namespace detail

/// K(i*kappa) and E(i*kappa) from a single AGM sweep.
///
/// Uses K(i kappa) = K(m)/sqrt(1+kappa^2), E(i kappa) = sqrt(1+kappa^2) E(m)
/// with m = kappa^2/(1+kappa^2).
template <std::floating_point Scalar>
EllipticPair<Scalar> elliptic_pair_imag(Scalar kappa) {
  detail::require_finite_nonneg(kappa, "elliptic integral");
  if (kappa == 0) return {std::numbers::pi_v<Scalar> / 2, std::numbers::pi_v<Scalar> / 2};
  const Scalar root = std::hypot(Scalar(1), kappa);
  const auto std_pair = detail::agm_standard<Scalar>(kappa / root, 1 / root);
  return {std_pair.k_val / root, std_pair.e_val * root};
}

template <std::floating_point Scalar>
Scalar ellip_K_imag(Scalar kappa) {
  return elliptic_pair_imag(kappa).k_val;
}

template <std::floating_point Scalar>
Scalar ellip_E_imag(Scalar kappa) {
  return elliptic_pair_imag(kappa).e_val;
}

/// psi(n+1) and psi(n+1/2) for n = 0..n_max (index n).
template <std::floating_point Scalar>
struct DigammaTable {
  std::vector<Scalar> psi_int;   // psi(n + 1)
  std::vector<Scalar> psi_half;  // psi(n + 1/2)
};

template <std::floating_point Scalar>
DigammaTable<Scalar> digamma_seq(int n_max) {
  if (n_max < 1) throw DomainError("digamma_seq: n_max must be >= 1");
  constexpr Scalar gamma = std::numbers::egamma_v<Scalar>;
  constexpr Scalar ln2 = std::numbers::ln2_v<Scalar>;
  DigammaTable<Scalar> t;
  t.psi_int.resize(n_max + 1);
  t.psi_half.resize(n_max + 1);
  // Kahan-compensated partial sums of 1/k and 1/(2k-1).
  Scalar h = 0, hc = 0, o = 0, oc = 0;
  t.psi_int[0] = -gamma;
  t.psi_half[0] = -gamma - 2 * ln2;
  for (int n = 1; n <= n_max; ++n) {
    Scalar y = Scalar(1) / n - hc;
    Scalar s = h + y;
    hc = (s - h) - y;
    h = s;
    y = Scalar(1) / (2 * n - 1) - oc;
    s = o + y;
    oc = (s - o) - y;
    o = s;
    t.psi_int[n] = -gamma + h;
    t.psi_half[n] = -gamma - 2 * ln2 + 2 * o;
  }
  return t;
}

/// Value of a truncated power series together with truncation bookkeeping.
template <std::floating_point Scalar>
struct SeriesValue {
  Scalar value{0};
  Scalar tail_bound{0};  // magnitude of the first omitted term
  int terms{0};
  bool at_limit{false};  // value is a removable-singularity limit
};

inline constexpr int kSeriesTermCap = 200;
inline constexpr double kSeriesDeltaMax = 0.9;

namespace detail {

// Visits n = 1, 2, ... with the coefficient c_n = ((2n-1)!!/(2n)!!)^2 and
// d_n = psi(n+1) - psi(n+1/2); stops when `visit` returns false.
template <std::floating_point Scalar, typename Visit>
void for_each_series_coefficient(Visit&& visit) {
  Scalar c = 1;
  Scalar d = 2 * std::numbers::ln2_v<Scalar>;
  for (int n = 1; n <= kSeriesTermCap + 1; ++n) {
    const Scalar r = Scalar(2 * n - 1) / Scalar(2 * n);
    c *= r * r;
    d -= Scalar(1) / (Scalar(n) * Scalar(2 * n - 1));
    if (!visit(n, c, d)) return;
  }
}

template <std::floating_point Scalar>
void check_series_argument(Scalar delta, Scalar delta_max, const char* what) {
  if (!std::isfinite(delta)) throw DomainError(std::string(what) + ": non-finite argument");
  if (std::abs(delta) >= 1) throw DomainError(std::string(what) + ": |delta| >= 1 is outside the radius");
  if (std::abs(delta) > delta_max)
    throw DomainError(std::string(what) + ": |delta| exceeds the configured delta_max");
}

// Generic truncated sum of sum_n term(n, c, d) with the relative stopping rule.
template <std::floating_point Scalar, typename Term>
SeriesValue<Scalar> sum_series(Scalar delta, Term&& term, const char* what, int first_term = 1) {
  SeriesValue<Scalar> out;
  bool capped = true;
  for_each_series_coefficient<Scalar>([&](int n, Scalar c, Scalar d) {
    const Scalar t = term(n, c, d);
    if (n > kSeriesTermCap) {
      out.tail_bound = std::abs(t);
      return false;
    }
    out.value += t;
    out.terms = n;
    if (n < first_term) return true;
    if (t == 0 || std::abs(t) < Scalar(1e-16) * std::abs(out.value)) {
      out.tail_bound = std::abs(t);
      capped = false;
      return false;
    }
    return true;
  });
  if (capped && std::abs(delta) > Scalar(kSeriesDeltaMax))
    throw NumericalError(std::string(what) + ": term cap reached near the radius of convergence");
  return out;
}

template <std::floating_point Scalar>
Scalar ipow(Scalar x, int p) {
  Scalar r = 1;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace detail

/// f(z) = sum_{n>=1} c_n (psi(n+1) - psi(n+1/2)) (-1)^n z^{2n-2}, the
/// holomorphic remainder in K(i/z) = -(2z log z/pi) K(iz) + 2z log 2 + z^3 f(z).
template <std::floating_point Scalar>
SeriesValue<Scalar> series_f(Scalar delta, Scalar delta_max = Scalar(kSeriesDeltaMax)) {
  detail::check_series_argument(delta, delta_max, "series_f");
  const Scalar z2 = delta * delta;
  Scalar power = 1;  // z^{2n-2}
  return detail::sum_series<Scalar>(
      delta,
      [&](int n, Scalar c, Scalar d) {
        const Scalar t = (n % 2 ? -1 : 1) * c * d * power;
        power *= z2;
        return t;
      },
      "series_f");
}

/// f'(z), term-by-term.
template <std::floating_point Scalar>
SeriesValue<Scalar> series_f_derivative(Scalar delta, Scalar delta_max = Scalar(kSeriesDeltaMax)) {
  detail::check_series_argument(delta, delta_max, "series_f_derivative");
  const Scalar z2 = delta * delta;
  Scalar power = delta;  // z^{2n-3} for n >= 2
  return detail::sum_series<Scalar>(
      delta,
      [&](int n, Scalar c, Scalar d) {
        if (n == 1) return Scalar(0);
        const Scalar t = (n % 2 ? -1 : 1) * c * d * Scalar(2 * n - 2) * power;
        power *= z2;
        return t;
      },
      "series_f_derivative", 2);
}

/// (2K(iz)/pi - 1)/z^2 from the hypergeometric series of K.
template <std::floating_point Scalar>
Scalar k_series_quotient(Scalar delta) {
  const Scalar z2 = delta * delta;
  if (std::abs(delta) < Scalar(1e-4)) {
    return Scalar(-0.25) + z2 * (Scalar(9.0 / 64) + z2 * (Scalar(-25.0 / 256) + z2 * Scalar(1225.0 / 16384)));
  }
  Scalar power = 1, value = 0;
  detail::for_each_series_coefficient<Scalar>([&](int n, Scalar c, Scalar) {
    const Scalar t = (n % 2 ? -1 : 1) * c * power;
    power *= z2;
    value += t;
    return n < kSeriesTermCap && std::abs(t) >= Scalar(1e-17) * std::abs(value);
  });
  return value;
}

/// g(z) = 1 + (1+z^2)((2K(iz)/pi - 1)/z^2 - z f'(z) - 2 f(z)), the holomorphic
/// remainder in the large-argument expansion of E(i/z). The z = 0 removable
/// singularity is evaluated as its limit and flagged.
template <std::floating_point Scalar>
SeriesValue<Scalar> series_g(Scalar delta, Scalar delta_max = Scalar(kSeriesDeltaMax)) {
  detail::check_series_argument(delta, delta_max, "series_g");
  const Scalar z = std::abs(delta);
  const auto f = series_f(z, delta_max);
  const auto fp = series_f_derivative(z, delta_max);
  SeriesValue<Scalar> out;
  out.value = 1 + (1 + z * z) * (k_series_quotient(z) - z * fp.value - 2 * f.value);
  out.tail_bound = (1 + z * z) * (z * fp.tail_bound + 2 * f.tail_bound);
  out.terms = std::max(f.terms, fp.terms);
  out.at_limit = (z == 0);
  return out;
}

template <std::floating_point Scalar>
struct A0B0 {
  Scalar a0;
  Scalar b0;
};

/// A0(delta) = delta E(i/delta)/(1+delta^2), B0(delta) = K(i/delta)/delta - A0(delta).
template <std::floating_point Scalar>
A0B0<Scalar> a0_b0(Scalar delta) {
  if (!std::isfinite(delta) || delta <= 0) throw DomainError("a0_b0: delta must be positive and finite");
  const auto ek = elliptic_pair_imag(1 / delta);
  const Scalar a0 = delta * ek.e_val / (1 + delta * delta);
  return {a0, ek.k_val / delta - a0};
}

/// Log-split form of A0 and B0:
///   A0 - 1 = alpha1 log(delta) + alpha2,   B0 = beta1 log(delta) + beta2,
/// with alpha1, alpha2, beta1, beta2 smooth (even) in delta. Below
/// delta = 1e-3 the smooth parts come from the f, g series; above, from the
/// closed forms. Valid at delta = 0 (the diagonal limit).
template <std::floating_point Scalar>
struct A0B0Split {
  Scalar alpha1, alpha2, beta1, beta2;
};

inline constexpr double kExpansionCrossover = 1e-3;

template <std::floating_point Scalar>
A0B0Split<Scalar> a0_b0_split(Scalar delta) {
  if (!std::isfinite(delta) || delta < 0) throw DomainError("a0_b0_split: delta must be >= 0");
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const auto small = elliptic_pair_imag(delta);
  const Scalar d2 = delta * delta;
  A0B0Split<Scalar> s;
  s.alpha1 = 2 * (small.e_val - (1 + d2) * small.k_val) / (pi * (1 + d2));
  s.beta1 = -2 * small.e_val / (pi * (1 + d2));
  if (delta < Scalar(kExpansionCrossover)) {
    const Scalar f = series_f(delta).value;
    const Scalar g = series_g(delta).value;
    s.alpha2 = d2 * (g - 1) / (1 + d2);
    s.beta2 = 2 * std::numbers::ln2_v<Scalar> - 1 + d2 * (f - (g - 1) / (1 + d2));
  } else {
    const auto ab = a0_b0(delta);
    const Scalar ld = std::log(delta);
    s.alpha2 = ab.a0 - 1 - s.alpha1 * ld;
    s.beta2 = ab.b0 - s.beta1 * ld;
  }
  return s;
}

/// Zeroth-mode single-layer kernel as a function of delta:
/// S0 = -(1/(2 pi)) int_0^{pi/2} (delta^2 + sin^2)^{-1/2} = -K(i/delta)/(2 pi delta).
template <std::floating_point Scalar>
Scalar s0_of_delta(Scalar delta) {
  if (!std::isfinite(delta) || delta <= 0) throw DomainError("s0_of_delta: delta must be positive");
  return -ellip_K_imag(1 / delta) / (2 * std::numbers::pi_v<Scalar> * delta);
}

/// S0 = sigma1 log(delta) + sigma2 with sigma1 = K(i delta)/pi^2.
template <std::floating_point Scalar>
struct S0Split {
  Scalar sigma1, sigma2;
};

template <std::floating_point Scalar>
S0Split<Scalar> s0_split(Scalar delta) {
  if (!std::isfinite(delta) || delta < 0) throw DomainError("s0_split: delta must be >= 0");
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  S0Split<Scalar> s;
  s.sigma1 = ellip_K_imag(delta) / (pi * pi);
  if (delta < Scalar(kExpansionCrossover)) {
    s.sigma2 = -std::numbers::ln2_v<Scalar> / pi - delta * delta * series_f(delta).value / (2 * pi);
  } else {
    s.sigma2 = s0_of_delta(delta) - s.sigma1 * std::log(delta);
  }
  return s;
}

namespace detail {

template <std::floating_point Scalar>
std::vector<Scalar> peak_breakpoints(Scalar delta) {
  std::vector<Scalar> bp;
  const Scalar end = std::numbers::pi_v<Scalar> / 2;
  for (Scalar x = delta; x < end; x *= 4) bp.push_back(x);
  return bp;
}

}  // namespace detail

/// A_k(delta), B_k(delta) by adaptive quadrature of their defining integrals.
template <std::floating_point Scalar>
A0B0<Scalar> ak_bk_quad(int k, Scalar delta, Scalar abs_tol = Scalar(1e-13)) {
  if (k < 0) throw DomainError("ak_bk_quad: mode index must be >= 0");
  if (!std::isfinite(delta) || delta <= 0) throw DomainError("ak_bk_quad: delta must be positive");
  const Scalar d2 = delta * delta;
  const auto bp = detail::peak_breakpoints(delta);
  const Scalar end = std::numbers::pi_v<Scalar> / 2;
  auto a_int = [&](Scalar phi) {
    const Scalar s = std::sin(phi);
    const Scalar q = d2 + s * s;
    return std::cos(2 * k * phi) / (q * std::sqrt(q));
  };
  auto b_int = [&](Scalar phi) {
    const Scalar s = std::sin(phi);
    const Scalar q = d2 + s * s;
    return std::cos(2 * k * phi) * s * s / (q * std::sqrt(q));
  };
  // A_k carries a delta^2 prefactor; scale the tolerance accordingly.
  const auto a = quadrature::integrate<Scalar>(a_int, Scalar(0), end, abs_tol / d2, Scalar(1e-14), bp);
  const auto b = quadrature::integrate<Scalar>(b_int, Scalar(0), end, abs_tol, Scalar(1e-14), bp);
  return {d2 * a.value, b.value};
}

/// int_0^{pi/2} cos(2k phi) (delta^2 + sin^2 phi)^{-1/2} dphi by adaptive quadrature.
template <std::floating_point Scalar>
Scalar sk_integral_quad(int k, Scalar delta, Scalar abs_tol = Scalar(1e-13)) {
  if (k < 0) throw DomainError("sk_integral_quad: mode index must be >= 0");
  if (!std::isfinite(delta) || delta <= 0) throw DomainError("sk_integral_quad: delta must be positive");
  const Scalar d2 = delta * delta;
  auto integrand = [&](Scalar phi) {
    const Scalar s = std::sin(phi);
    return std::cos(2 * k * phi) / std::sqrt(d2 + s * s);
  };
  return quadrature::integrate<Scalar>(integrand, Scalar(0), std::numbers::pi_v<Scalar> / 2, abs_tol,
                                       Scalar(1e-14), detail::peak_breakpoints(delta))
      .value;
}

}  // namespace nprev
