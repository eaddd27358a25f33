#pragma once

#include <utility>
#include <vector>

#include "nprev/geometry.hpp"
#include "nprev/spectral.hpp"

namespace nprev {

/// Weyl constants from the sign-split boundary integrals of v_p / y.
struct WeylConstants {
  double c0_plus = 0.0;   // (1/4pi) int_{v_p < 0} |v_p| / y
  double c0_minus = 0.0;  // (1/4pi) int_{v_p > 0} v_p / y
  double c0() const { return c0_plus + c0_minus; }
};

/// Sign changes of v_p are located by bisection; each signed arc is
/// integrated with `panels` 8-point Gauss-Legendre panels.
WeylConstants c0_pm(const GeneratingCurve& curve, int panels = 64);

/// Index window [j_min, j_max] (1-based, inclusive).
struct FitWindow {
  int j_min = 20;
  int j_max = 60;
  int size() const { return j_max - j_min + 1; }
};

/// Default window (20, min(60, n/16)).
FitWindow default_fit_window(int n);

inline constexpr int kMinFitPoints = 10;

/// Least-squares constants in j * rho_j ~ C over the window.
struct WeylFit {
  double c0_plus = 0.0, c0_minus = 0.0, c0 = 0.0;
  double sd_plus = 0.0, sd_minus = 0.0, sd_all = 0.0;  // residual standard deviations
  FitWindow window;
};

WeylFit fit_weyl(const SpectrumResult& spectrum, FitWindow window);

/// Log-log slope of |rho_j| against j.
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  double band = 0.0;  // 95% half-width
  FitWindow window;
};

DecayFit decay_exponent(const SpectrumResult& spectrum, FitWindow window);
/// Same fit on an arbitrary list of eigenvalue magnitudes ordered by modulus.
DecayFit decay_exponent(const std::vector<double>& magnitudes, FitWindow window);

struct AsymptoticsReport {
  double c0_plus = 0.0, c0_minus = 0.0, c0 = 0.0;
  double hyperbolic_area_over_4pi = 0.0;
  double fitted_c0_plus = 0.0, fitted_c0_minus = 0.0, fitted_c0 = 0.0;
  FitWindow fit_window;
  double rel_err_plus = 0.0, rel_err_minus = 0.0, rel_err_all = 0.0;
  double sd_plus = 0.0, sd_minus = 0.0, sd_all = 0.0;
  DecayFit decay;
  int n = 0;
};

AsymptoticsReport make_asymptotics_report(const GeneratingCurve& curve, const SpectrumResult& spectrum,
                                          FitWindow window, int quadrature_n = 1024);

}  // namespace nprev
