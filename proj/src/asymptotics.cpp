#include "nprev/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nprev/errors.hpp"
#include "nprev/quadrature.hpp"

namespace nprev {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double x_speed(const GeneratingCurve& c, double t) { return c.evaluate(t).d1.x(); }

double bisect_root(const GeneratingCurve& c, double a, double b) {
  double fa = x_speed(c, a);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = x_speed(c, m);
    if (fm == 0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double gauss_panels(const GeneratingCurve& c, double a, double b, int panels,
                    const quadrature::GaussLegendre& gl) {
  double sum = 0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const CurvePoint cp = c.evaluate(mid + 0.5 * h * gl.nodes[k]);
      sum += gl.weights[k] * 0.5 * h * cp.d1.x() / cp.pos.y();
    }
  }
  return sum;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double stddev(const std::vector<double>& v, double m) {
  if (v.size() < 2) return 0.0;
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

void check_window(FitWindow w, std::size_t available, const char* what) {
  if (w.j_min < 1 || w.size() < kMinFitPoints)
    throw DomainError(std::string(what) + ": fit window needs at least 10 points");
  if (static_cast<std::size_t>(w.j_max) > available)
    throw DomainError(std::string(what) + ": fit window exceeds the available eigenvalues");
}

std::vector<double> scaled(const std::vector<double>& rho, FitWindow w) {
  std::vector<double> out;
  for (int j = w.j_min; j <= w.j_max; ++j) out.push_back(j * rho[j - 1]);
  return out;
}

}  // namespace

WeylConstants c0_pm(const GeneratingCurve& curve, int panels) {
  if (panels < 1) throw DomainError("c0_pm: panels must be positive");
  curve.validate();
  static const quadrature::GaussLegendre gl = quadrature::gauss_legendre(8);
  std::vector<double> cuts = curve.corner_parameters();
  if (cuts.empty()) cuts.push_back(0.0);
  cuts.push_back(kTwoPi);
  constexpr int scan = 2048;
  WeylConstants w;
  double signed_plus = 0, signed_minus = 0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    // Sign changes of x'(t), scanned on the open segment.
    std::vector<double> split{a};
    const double eps = (b - a) * 1e-12;
    double prev_t = a + eps, prev_v = x_speed(curve, prev_t);
    for (int k = 1; k <= scan; ++k) {
      const double t = k == scan ? b - eps : a + (b - a) * k / scan;
      const double v = x_speed(curve, t);
      if ((v > 0 && prev_v < 0) || (v < 0 && prev_v > 0)) split.push_back(bisect_root(curve, prev_t, t));
      prev_t = t;
      prev_v = v;
    }
    split.push_back(b);
    for (std::size_t k = 0; k + 1 < split.size(); ++k) {
      const double lo = split[k], hi = split[k + 1];
      if (hi <= lo) continue;
      const double val = gauss_panels(curve, lo, hi, panels, gl);
      const double mid_v = x_speed(curve, 0.5 * (lo + hi));
      if (mid_v < 0) signed_plus += val;
      else if (mid_v > 0) signed_minus += val;
    }
  }
  w.c0_plus = -signed_plus / (2 * kTwoPi);
  w.c0_minus = signed_minus / (2 * kTwoPi);
  return w;
}

FitWindow default_fit_window(int n) { return {20, std::min(60, n / 16)}; }

WeylFit fit_weyl(const SpectrumResult& spectrum, FitWindow window) {
  check_window(window, std::min(spectrum.pos_eigs.size(), spectrum.neg_eigs.size()), "fit_weyl");
  std::vector<double> all_mag;
  for (double v : spectrum.all_eigs) all_mag.push_back(std::abs(v));
  check_window(window, all_mag.size(), "fit_weyl");
  WeylFit f;
  f.window = window;
  const auto p = scaled(spectrum.pos_eigs, window);
  const auto m = scaled(spectrum.neg_eigs, window);
  const auto a = scaled(all_mag, window);
  f.c0_plus = mean(p);
  f.c0_minus = mean(m);
  f.c0 = mean(a);
  f.sd_plus = stddev(p, f.c0_plus);
  f.sd_minus = stddev(m, f.c0_minus);
  f.sd_all = stddev(a, f.c0);
  return f;
}

DecayFit decay_exponent(const std::vector<double>& magnitudes, FitWindow window) {
  check_window(window, magnitudes.size(), "decay_exponent");
  std::vector<double> x, y;
  for (int j = window.j_min; j <= window.j_max; ++j) {
    const double r = std::abs(magnitudes[j - 1]);
    if (!(r > 0)) throw NumericalError("decay_exponent: zero eigenvalue inside the fit window");
    x.push_back(std::log(double(j)));
    y.push_back(std::log(r));
  }
  const double mx = mean(x), my = mean(y);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  DecayFit d;
  d.window = window;
  d.slope = sxy / sxx;
  d.intercept = my - d.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (d.intercept + d.slope * x[i]);
    rss += e * e;
  }
  d.std_error = std::sqrt(rss / (x.size() - 2) / sxx);
  d.band = 1.96 * d.std_error;
  return d;
}

DecayFit decay_exponent(const SpectrumResult& spectrum, FitWindow window) {
  std::vector<double> mags;
  for (double v : spectrum.all_eigs) mags.push_back(std::abs(v));
  return decay_exponent(mags, window);
}

AsymptoticsReport make_asymptotics_report(const GeneratingCurve& curve, const SpectrumResult& spectrum,
                                          FitWindow window, int quadrature_n) {
  AsymptoticsReport r;
  const WeylConstants w = c0_pm(curve);
  r.c0_plus = w.c0_plus;
  r.c0_minus = w.c0_minus;
  r.c0 = w.c0();
  r.hyperbolic_area_over_4pi = hyperbolic_area_over_4pi(curve, quadrature_n);
  const WeylFit f = fit_weyl(spectrum, window);
  r.fitted_c0_plus = f.c0_plus;
  r.fitted_c0_minus = f.c0_minus;
  r.fitted_c0 = f.c0;
  r.sd_plus = f.sd_plus;
  r.sd_minus = f.sd_minus;
  r.sd_all = f.sd_all;
  r.fit_window = window;
  r.rel_err_plus = std::abs(f.c0_plus - r.c0_plus) / r.c0_plus;
  r.rel_err_minus = std::abs(f.c0_minus - r.c0_minus) / r.c0_minus;
  r.rel_err_all = std::abs(f.c0 - r.c0) / r.c0;
  r.decay = decay_exponent(spectrum, window);
  r.n = spectrum.n;
  return r;
}

}  // namespace nprev
