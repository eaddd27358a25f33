#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <vector>

#include "nprev/errors.hpp"

namespace nprev::quadrature {

template <std::floating_point Scalar>
struct IntegralEstimate {
  Scalar value{0};
  Scalar error{0};
  int intervals{0};
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::floating_point Scalar, typename F>
IntegralEstimate<Scalar> gk15(F&& f, Scalar a, Scalar b) {
  const Scalar center = (a + b) / 2;
  const Scalar half = (b - a) / 2;
  const Scalar fc = f(center);
  Scalar kronrod = fc * Scalar(kWgk[7]);
  Scalar gauss = fc * Scalar(kWg[3]);
  for (int j = 0; j < 7; ++j) {
    const Scalar dx = half * Scalar(kXgk[j]);
    const Scalar sum = f(center - dx) + f(center + dx);
    kronrod += Scalar(kWgk[j]) * sum;
    if (j % 2 == 1) gauss += Scalar(kWg[j / 2]) * sum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), 1};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over [a, b].
///
/// `breakpoints` are optional interior points where the integrand is known to
/// vary sharply; the initial partition is split there. Intervals are bisected
/// until the summed error estimate falls below max(abs_tol, rel_tol*|I|).
/// Throws NumericalError when `max_intervals` is exhausted.
template <std::floating_point Scalar, typename F>
IntegralEstimate<Scalar> integrate(F&& f, Scalar a, Scalar b, Scalar abs_tol,
                                   Scalar rel_tol = Scalar(0),
                                   const std::vector<Scalar>& breakpoints = {},
                                   int max_intervals = 4000) {
  struct Piece {
    Scalar a, b;
    IntegralEstimate<Scalar> est;
  };
  std::vector<Piece> pieces;
  std::vector<Scalar> cuts{a};
  for (Scalar x : breakpoints)
    if (x > cuts.back() && x < b) cuts.push_back(x);
  cuts.push_back(b);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    pieces.push_back({cuts[i], cuts[i + 1], detail::gk15<Scalar>(f, cuts[i], cuts[i + 1])});

  for (;;) {
    Scalar total = 0, err = 0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      total += pieces[i].est.value;
      err += pieces[i].est.error;
      if (pieces[i].est.error > pieces[worst].est.error) worst = i;
    }
    const Scalar target = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= target) return {total, err, static_cast<int>(pieces.size())};
    if (static_cast<int>(pieces.size()) >= max_intervals)
      throw NumericalError("adaptive quadrature did not converge");
    const Piece p = pieces[worst];
    const Scalar mid = (p.a + p.b) / 2;
    pieces[worst] = {p.a, mid, detail::gk15<Scalar>(f, p.a, mid)};
    pieces.push_back({mid, p.b, detail::gk15<Scalar>(f, mid, p.b)});
  }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_m.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int m);

}  // namespace nprev::quadrature
