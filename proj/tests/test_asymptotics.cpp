#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nprev/asymptotics.hpp"
#include "nprev/errors.hpp"
#include "support.hpp"

using namespace nprev;
using testing_support::kPi;

namespace {

// x -> -x with t -> pi - t
GeneratingCurve mirrored(FourierStar s) {
  for (std::size_t i = 0; i < s.cos_coeffs.size(); ++i)
    if ((i + 1) % 2 == 1) s.cos_coeffs[i] = -s.cos_coeffs[i];
  for (std::size_t i = 0; i < s.sin_coeffs.size(); ++i)
    if ((i + 1) % 2 == 0) s.sin_coeffs[i] = -s.sin_coeffs[i];
  s.center_x = -s.center_x;
  return GeneratingCurve::fourier_star(s);
}

const SpectrumResult& torus_1024() {
  static const SpectrumResult r = compute_spectrum(testing_support::torus(), 1024);
  return r;
}

}  // namespace

TEST_CASE("Weyl constants: sum, difference and ordering on the catalog") {
  for (const auto& [name, curve] : testing_support::full_catalog()) {
    const auto w = c0_pm(curve);
    CAPTURE(name);
    CHECK(w.c0_plus > 0);
    CHECK(w.c0_minus > 0);
    CHECK(w.c0_plus < w.c0_minus);
    CHECK(std::abs(w.c0() - (w.c0_plus + w.c0_minus)) < 1e-12);
    const double area = hyperbolic_area_over_4pi(curve, curve.has_corners() ? 4096 : 1024);
    // trapezoid area loses accuracy below C^infinity
    const double tol = curve.regularity() == Regularity::smooth ? 1e-10 : 1e-6;
    CHECK(std::abs((w.c0_minus - w.c0_plus) - area) < tol);
  }
}

TEST_CASE("torus Weyl constants") {
  const auto w = c0_pm(testing_support::torus());
  CHECK(w.c0_minus - w.c0_plus == doctest::Approx(0.5 * (2 / std::sqrt(3.0) - 1)).epsilon(1e-12));
  CHECK(w.c0_plus == doctest::Approx(0.05754991).epsilon(1e-7));
  CHECK(w.c0_minus == doctest::Approx(0.13490018).epsilon(1e-7));
}

TEST_CASE("circle c0_plus against a direct parametrization oracle") {
  for (auto [b, a] : {std::pair{2.0, 1.0}, std::pair{3.0, 0.5}, std::pair{1.2, 1.0}}) {
    // p(t) = (a cos t, b + a sin t): v_p = -sin t, ds = a dt
    const double plus = testing_support::gk_integral(
                            [&](double t) { return a * std::sin(t) / (b + a * std::sin(t)); }, 0.0, kPi) /
                        (4 * kPi);
    const double minus = testing_support::gk_integral(
                             [&](double t) { return a * std::sin(t) / (b - a * std::sin(t)); }, 0.0, kPi) /
                         (4 * kPi);
    const auto w = c0_pm(GeneratingCurve::circle(b, a));
    CHECK(std::abs(w.c0_plus - plus) < 1e-10);
    CHECK(std::abs(w.c0_minus - minus) < 1e-10);
  }
}

TEST_CASE("Weyl constants are mirror invariant") {
  FourierStar s;
  s.center_height = 3.0;
  s.base_radius = 1.0;
  s.cos_coeffs = {0.1, 0.12, -0.04};
  s.sin_coeffs = {0.08, 0.06, 0.05};
  s.center_x = 0.7;
  const auto a = c0_pm(GeneratingCurve::fourier_star(s));
  const auto b = c0_pm(mirrored(s));
  const auto pa = GeneratingCurve::fourier_star(s).evaluate(0.3).pos;
  const auto pb = mirrored(s).evaluate(kPi - 0.3).pos;
  CHECK(pa.x() == doctest::Approx(-pb.x()));
  CHECK(pa.y() == doctest::Approx(pb.y()));
  CHECK(a.c0_plus == doctest::Approx(b.c0_plus).epsilon(1e-12));
  CHECK(a.c0_minus == doctest::Approx(b.c0_minus).epsilon(1e-12));
}

TEST_CASE("Weyl constants converge with the panel count") {
  for (const auto& [name, curve] : testing_support::full_catalog()) {
    const auto ref = c0_pm(curve, 256);
    const double e4 = std::abs(c0_pm(curve, 4).c0_plus - ref.c0_plus);
    const double e8 = std::abs(c0_pm(curve, 8).c0_plus - ref.c0_plus);
    CAPTURE(name);
    CHECK((e8 < 1e-13 || e4 / e8 > 4.0));
  }
  CHECK_THROWS_AS(c0_pm(testing_support::torus(), 0), DomainError);
  CHECK_THROWS_AS(c0_pm(GeneratingCurve::circle(1.0, 2.0)), GeometryError);
}

TEST_CASE("fit windows") {
  CHECK(default_fit_window(1024).j_min == 20);
  CHECK(default_fit_window(1024).j_max == 60);
  CHECK(default_fit_window(512).j_max == 32);
  const auto r = compute_spectrum(testing_support::torus(), 128);
  CHECK_THROWS_AS(fit_weyl(r, {20, 28}), DomainError);
  CHECK_THROWS_AS(fit_weyl(r, {0, 20}), DomainError);
  CHECK_THROWS_AS(fit_weyl(r, {20, 200}), DomainError);
  CHECK_THROWS_AS(decay_exponent(r, {5, 13}), DomainError);
  CHECK_NOTHROW(fit_weyl(r, {10, 19}));
}

TEST_CASE("fit on synthetic data") {
  SpectrumResult s;
  for (int j = 1; j <= 100; ++j) {
    s.pos_eigs.push_back(0.2 / j);
    s.neg_eigs.push_back(0.3 / j);
  }
  for (int j = 0; j < 100; ++j) {
    s.all_eigs.push_back(s.neg_eigs[j]);
    s.all_eigs.push_back(s.pos_eigs[j]);
  }
  std::sort(s.all_eigs.begin(), s.all_eigs.end(), std::greater<>());
  const auto f = fit_weyl(s, {20, 60});
  CHECK(f.c0_plus == doctest::Approx(0.2));
  CHECK(f.c0_minus == doctest::Approx(0.3));
  CHECK(f.sd_plus < 1e-14);
  CHECK(f.c0 == doctest::Approx(0.5).epsilon(0.02));
  const auto d = decay_exponent(s.pos_eigs, {20, 60});
  CHECK(d.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(d.intercept == doctest::Approx(std::log(0.2)).epsilon(1e-12));
  CHECK(d.band < 1e-10);
}

TEST_CASE("torus Weyl fit and decay exponent") {
  const auto& r = torus_1024();
  const auto report = make_asymptotics_report(testing_support::torus(), r, {20, 60});
  CHECK(report.rel_err_plus < 0.10);
  CHECK(report.rel_err_minus < 0.10);
  CHECK(std::abs(report.fitted_c0 - (report.fitted_c0_plus + report.fitted_c0_minus)) <=
        2 * (report.sd_all + report.sd_plus + report.sd_minus) + 1e-3);
  CHECK(report.decay.slope == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(report.n == 1024);
  const double s1 = decay_exponent(r, {20, 60}).slope;
  const double s2 = decay_exponent(r, {30, 90}).slope;
  CHECK(std::abs(s1 - s2) < 0.05);
}

TEST_CASE("planar-only spectrum decays much faster") {
  const auto g = SampledCurve::make(GeneratingCurve::ellipse(3.0, 1.6, 0.9), 256);
  std::vector<double> mags;
  for (double v : nystrom_eigenvalues(assemble_planar_np(g))) mags.push_back(std::abs(v));
  const auto d = decay_exponent(mags, {2, 12});
  CHECK(d.slope < -2.0);
}

TEST_CASE("reduced-regularity star is consistent with its decay bound") {
  const double alpha = 0.5;
  const auto r = compute_spectrum(testing_support::rough_star(alpha), 1024);
  CHECK(r.symmetrization_residual < 1e-3);
  const auto d = decay_exponent(r, {20, 60});
  CHECK(d.slope <= -alpha + 0.05);
}
