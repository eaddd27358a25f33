#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nprev/geometry.hpp"
#include "nprev/special_functions.hpp"

namespace testing_support {

inline constexpr double kPi = std::numbers::pi;

/// Adaptive Gauss-Kronrod (61-point) oracle, split at `cuts`.
template <typename F>
double gk_integral(F f, double a, double b, std::vector<double> cuts = {}) {
  std::vector<double> pts{a};
  for (double c : cuts)
    if (c > pts.back() && c < b) pts.push_back(c);
  pts.push_back(b);
  double total = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double err = 0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 12, 1e-14, &err);
  }
  return total;
}

/// Geometric cuts delta, 2 delta, 4 delta, ... below pi/2, for integrands
/// peaked at phi ~ delta.
inline std::vector<double> geometric_cuts(double delta) {
  std::vector<double> c;
  for (double x = delta / 4; x < kPi / 2; x *= 2) c.push_back(x);
  return c;
}

inline std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(lo * std::pow(hi / lo, count == 1 ? 0.0 : double(i) / (count - 1)));
  return v;
}

struct NamedCurve {
  std::string name;
  nprev::GeneratingCurve curve;
};

inline nprev::GeneratingCurve torus() { return nprev::GeneratingCurve::circle(2.0, 1.0); }

/// Smooth catalog: torus, ellipse, Fourier star.
inline std::vector<NamedCurve> smooth_catalog() {
  nprev::FourierStar star;
  star.center_height = 3.0;
  star.base_radius = 1.0;
  star.cos_coeffs = {0.0, 0.12, 0.0};
  star.sin_coeffs = {0.08, 0.0, 0.05};
  return {{"torus", torus()},
          {"ellipse", nprev::GeneratingCurve::ellipse(3.0, 1.6, 0.9, 0.5)},
          {"fourier_star", nprev::GeneratingCurve::fourier_star(star)}};
}

/// C^{1,alpha} star: r = 1 + 0.1 |sin t|^{1 + alpha}.
inline nprev::GeneratingCurve rough_star(double alpha) {
  nprev::FourierStar star;
  star.center_height = 3.0;
  star.base_radius = 1.0;
  star.rough_amplitude = 0.1;
  star.rough_alpha = alpha;
  return nprev::GeneratingCurve::fourier_star(star);
}

inline nprev::GeneratingCurve unit_square() { return nprev::GeneratingCurve::square(2.0, 1.0); }

inline std::vector<NamedCurve> full_catalog() {
  auto c = smooth_catalog();
  c.push_back({"rough_star", rough_star(0.5)});
  c.push_back({"square", unit_square()});
  return c;
}

/// Zeroth-mode kernel by quadrature of its defining integral over the full
/// circle, (sqrt(y y')/4pi) int_0^{2pi} ((p-q).n - 2 v y' sin^2(phi/2)) / (...)^{3/2} cos(k phi) dphi.
inline double kk_full_circle(int k, const nprev::CurveSample& p, const nprev::CurveSample& q) {
  const nprev::Point d = p.pos - q.pos;
  const double dn = d.dot(p.normal), r2 = d.squaredNorm();
  const double y = p.pos.y(), yq = q.pos.y();
  auto f = [&](double phi) {
    const double s = std::sin(phi / 2);
    const double den = r2 + 4 * y * yq * s * s;
    return std::cos(k * phi) * (dn - 2 * p.v_p * yq * s * s) / (den * std::sqrt(den));
  };
  const double dl = std::sqrt(r2) / (2 * std::sqrt(y * yq));
  std::vector<double> cuts;
  for (double c : geometric_cuts(dl)) cuts.push_back(2 * c);
  std::vector<double> all = cuts;
  for (auto it = cuts.rbegin(); it != cuts.rend(); ++it) all.push_back(2 * kPi - *it);
  all.insert(all.begin() + static_cast<long>(cuts.size()), kPi);
  return std::sqrt(y * yq) / (4 * kPi) * gk_integral(f, 0.0, 2 * kPi, all);
}

/// Residuals of the large-argument expansions of K(i/d) and E(i/d).
inline double b1_residual(double d) {
  return nprev::ellip_K_imag(1 / d) + 2 * d * std::log(d) / kPi * nprev::ellip_K_imag(d) - 2 * d * std::numbers::ln2 -
         d * d * d * nprev::series_f(d).value;
}

inline double b2_residual(double d) {
  const double lead = 2 * (nprev::ellip_E_imag(d) - (1 + d * d) * nprev::ellip_K_imag(d)) / (kPi * d);
  return nprev::ellip_E_imag(1 / d) - lead * std::log(d) - 1 / d - d * nprev::series_g(d).value;
}

/// A_k, B_k by quadrature of their defining phi-integrals.
inline std::pair<double, double> ab_oracle(int k, double d) {
  const double d2 = d * d;
  auto a = [&](double phi) {
    const double s = std::sin(phi), q = d2 + s * s;
    return std::cos(2 * k * phi) / (q * std::sqrt(q));
  };
  auto b = [&](double phi) {
    const double s = std::sin(phi), q = d2 + s * s;
    return std::cos(2 * k * phi) * s * s / (q * std::sqrt(q));
  };
  const auto cuts = geometric_cuts(d);
  return {d2 * gk_integral(a, 0.0, kPi / 2, cuts), gk_integral(b, 0.0, kPi / 2, cuts)};
}

}  // namespace testing_support
