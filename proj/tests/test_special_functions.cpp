#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>

#include "nprev/errors.hpp"
#include "nprev/special_functions.hpp"
#include "support.hpp"

using namespace nprev;
using testing_support::gk_integral;
using testing_support::kPi;
using testing_support::ab_oracle;
using testing_support::b1_residual;
using testing_support::b2_residual;

namespace {

double k_oracle(double kappa) {
  return gk_integral([&](double p) { return 1 / std::sqrt(1 + kappa * kappa * std::sin(p) * std::sin(p)); }, 0.0,
                     kPi / 2);
}

double e_oracle(double kappa) {
  return gk_integral([&](double p) { return std::sqrt(1 + kappa * kappa * std::sin(p) * std::sin(p)); }, 0.0,
                     kPi / 2);
}

}  // namespace

TEST_CASE("elliptic integrals at zero argument") {
  CHECK(ellip_K_imag(0.0) == kPi / 2);
  CHECK(ellip_E_imag(0.0) == kPi / 2);
}

TEST_CASE("elliptic integrals match quadrature") {
  for (double kappa : {0.1, 0.5, 1.0, 3.0, 20.0}) {
    CAPTURE(kappa);
    CHECK(ellip_K_imag(kappa) == doctest::Approx(k_oracle(kappa)).epsilon(1e-12));
    CHECK(ellip_E_imag(kappa) == doctest::Approx(e_oracle(kappa)).epsilon(1e-12));
  }
}

TEST_CASE("imaginary-modulus transformation against standard-modulus evaluation") {
  for (double kappa : testing_support::logspace(1e-3, 100.0, 60)) {
    const double root = std::sqrt(1 + kappa * kappa);
    const double k = kappa / root;
    CAPTURE(kappa);
    CHECK(ellip_K_imag(kappa) == doctest::Approx(boost::math::ellint_1(k) / root).epsilon(1e-12));
    CHECK(ellip_E_imag(kappa) == doctest::Approx(boost::math::ellint_2(k) * root).epsilon(1e-12));
  }
}

TEST_CASE("elliptic pair invariants") {
  for (double kappa : testing_support::logspace(1e-4, 1e4, 50)) {
    const auto p = elliptic_pair_imag(kappa);
    CHECK(p.k_val > 0);
    CHECK(p.e_val > 0);
    CHECK(p.e_val <= p.k_val * (1 + kappa * kappa) * (1 + 1e-14));
  }
}

TEST_CASE("K(i kappa) - log(kappa)/kappa stays bounded for large kappa") {
  for (double kappa : testing_support::logspace(10.0, 1e4, 20)) {
    const double v = ellip_K_imag(kappa);
    CHECK(std::abs(v - std::log(kappa) / kappa) < 1.0);
    CHECK(v == doctest::Approx(k_oracle(kappa)).epsilon(1e-10));
  }
}

TEST_CASE("E - K derivative identity by finite differences") {
  // E(z) = (1 - z^2) K(z) + z (1 - z^2) K'(z) at z = i kappa becomes
  // E(i kappa) = (1 + kappa^2) (K(i kappa) + kappa dK/dkappa).
  for (double kappa : {0.2, 0.7, 1.5, 4.0}) {
    const double h = 1e-5 * kappa;
    const double dk = (ellip_K_imag(kappa + h) - ellip_K_imag(kappa - h)) / (2 * h);
    const double rhs = (1 + kappa * kappa) * (ellip_K_imag(kappa) + kappa * dk);
    CHECK(std::abs(ellip_E_imag(kappa) - rhs) / ellip_E_imag(kappa) < 1e-6);
  }
}

TEST_CASE("non-finite or negative elliptic arguments are rejected") {
  CHECK_THROWS_AS(ellip_K_imag(std::nan("")), DomainError);
  CHECK_THROWS_AS(ellip_E_imag(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(ellip_K_imag(-1.0), DomainError);
}

TEST_CASE("digamma sequences") {
  const auto t = digamma_seq<double>(200);
  const double gamma = std::numbers::egamma;
  CHECK(t.psi_int[0] == doctest::Approx(-gamma).epsilon(1e-15));
  CHECK(t.psi_half[1] == doctest::Approx(-gamma - 2 * std::numbers::ln2 + 2).epsilon(1e-15));
  for (int n = 1; n <= 50; ++n) CHECK(t.psi_int[n] - t.psi_int[n - 1] == doctest::Approx(1.0 / n).epsilon(1e-13));
  for (int n = 1; n <= 200; ++n) {
    CHECK(std::abs(t.psi_int[n] - boost::math::digamma(n + 1.0)) < 1e-15 * std::max(1.0, std::abs(t.psi_int[n])) * 4);
    CHECK(std::abs(t.psi_half[n] - boost::math::digamma(n + 0.5)) <
          1e-15 * std::max(1.0, std::abs(t.psi_half[n])) * 4);
  }
  CHECK_THROWS_AS(digamma_seq<double>(0), DomainError);
}

TEST_CASE("series f at zero is its first term") {
  const auto t = digamma_seq<double>(1);
  const double first = -0.25 * (t.psi_int[1] - t.psi_half[1]);
  CHECK(series_f(0.0).value == doctest::Approx(first).epsilon(1e-15));
  CHECK(first == doctest::Approx(-0.25 * (2 * std::numbers::ln2 - 1)).epsilon(1e-15));
}

TEST_CASE("series f and g are even") {
  for (double d : {0.05, 0.3, 0.7}) {
    CHECK(series_f(d).value == series_f(-d).value);
    CHECK(series_g(d).value == series_g(-d).value);
  }
}

TEST_CASE("series domain and truncation") {
  CHECK_THROWS_AS(series_f(1.0), DomainError);
  CHECK_THROWS_AS(series_f(0.95), DomainError);
  CHECK_THROWS_AS(series_f(0.95, 0.99), NumericalError);  // 200-term cap near the radius
  CHECK_NOTHROW(series_f(0.85));
  const auto v = series_f(0.5);
  CHECK(v.terms > 1);
  CHECK(v.tail_bound < 1e-16 * std::abs(v.value) * 10);
  CHECK(series_g(0.0).at_limit);
  CHECK(series_g(0.0).value == doctest::Approx(0.25 + std::numbers::ln2).epsilon(1e-14));
}

TEST_CASE("large-argument identity for K") {
  for (double d : {0.1, 0.3, 0.5}) CHECK(std::abs(b1_residual(d)) < 1e-9);
  for (double d : testing_support::logspace(1e-4, 0.9, 200)) {
    CAPTURE(d);
    CHECK(std::abs(b1_residual(d)) < 1e-8);
  }
}

TEST_CASE("large-argument identity for E") {
  CHECK(std::abs(b2_residual(0.2)) < 1e-9);
  for (double d : testing_support::logspace(1e-4, 0.9, 200)) {
    CAPTURE(d);
    CHECK(std::abs(b2_residual(d)) < 1e-8);
  }
}

TEST_CASE("g near zero matches its limit") {
  CHECK(series_g(1e-3).value == doctest::Approx(series_g(0.0).value).epsilon(1e-5));
  // Taylor branch below 1e-4 joins the series branch smoothly.
  CHECK(series_g(0.99e-4).value == doctest::Approx(series_g(1.01e-4).value).epsilon(1e-10));
}


TEST_CASE("A0, B0 closed forms against quadrature") {
  const auto [a, b] = ab_oracle(0, 0.5);
  CHECK(a0_b0(0.5).a0 == doctest::Approx(a).epsilon(1e-10));
  CHECK(a0_b0(0.5).b0 == doctest::Approx(b).epsilon(1e-10));
  for (double d : testing_support::logspace(1e-3, 10.0, 100)) {
    const auto ab = a0_b0(d);
    const auto [ao, bo] = ab_oracle(0, d);
    CAPTURE(d);
    CHECK(ab.a0 == doctest::Approx(ao).epsilon(1e-9));
    CHECK(ab.b0 == doctest::Approx(bo).epsilon(1e-9));
  }
}

TEST_CASE("A0, B0 small- and large-delta behaviour") {
  for (double d : testing_support::logspace(1e-6, 0.05, 20)) {
    const auto ab = a0_b0(d);
    CHECK(std::abs(ab.a0 - 1) <= 2 * d * d * std::abs(std::log(d)));
    CHECK(std::abs(ab.b0 + std::log(d)) < 1.0);
  }
  CHECK(a0_b0(1e-8).a0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(100 * a0_b0(100.0).a0 == doctest::Approx(kPi / 2).epsilon(0.02));
  CHECK_THROWS_AS(a0_b0(0.0), DomainError);
  CHECK_THROWS_AS(a0_b0(-1.0), DomainError);
}

TEST_CASE("A0 rises to a single maximum and then decreases") {
  // A0(0+) = 1 and delta A0 -> pi/2, with one interior maximum near
  // delta = 0.458787 (located independently to 30 digits).
  constexpr double peak = 0.458787059427;
  double prev = a0_b0(1e-3).a0;
  for (double d : testing_support::logspace(1.1e-3, peak * 0.999, 150)) {
    const double a = a0_b0(d).a0;
    CHECK(a > prev);
    prev = a;
  }
  prev = a0_b0(peak * 1.001).a0;
  for (double d : testing_support::logspace(peak * 1.002, 10.0, 150)) {
    const double a = a0_b0(d).a0;
    CHECK(a < prev);
    prev = a;
  }
  CHECK(a0_b0(peak).a0 == doctest::Approx(ab_oracle(0, peak).first).epsilon(1e-10));
  CHECK(a0_b0(peak).a0 > a0_b0(peak * 0.99).a0);
  CHECK(a0_b0(peak).a0 > a0_b0(peak * 1.01).a0);
}

TEST_CASE("log-split form reproduces A0 and B0") {
  for (double d : testing_support::logspace(1e-6, 5.0, 80)) {
    const auto s = a0_b0_split(d);
    const auto ab = a0_b0(d);
    CAPTURE(d);
    CHECK(1 + s.alpha1 * std::log(d) + s.alpha2 == doctest::Approx(ab.a0).epsilon(1e-12));
    CHECK(s.beta1 * std::log(d) + s.beta2 == doctest::Approx(ab.b0).epsilon(1e-11));
  }
  const auto z = a0_b0_split(0.0);
  CHECK(z.alpha1 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(z.beta1 == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(z.beta2 == doctest::Approx(2 * std::numbers::ln2 - 1).epsilon(1e-15));
  // The series and closed-form branches agree across the crossover.
  const auto lo = a0_b0_split(0.999e-3), hi = a0_b0_split(1.001e-3);
  CHECK(lo.beta2 == doctest::Approx(hi.beta2).epsilon(1e-9));
  CHECK(lo.alpha2 == doctest::Approx(hi.alpha2).epsilon(1e-5));
}

TEST_CASE("single-layer closed form against quadrature") {
  for (double d : testing_support::logspace(1e-3, 20.0, 40)) {
    const double q = gk_integral([&](double p) { return 1 / std::sqrt(d * d + std::sin(p) * std::sin(p)); }, 0.0,
                                 kPi / 2, testing_support::geometric_cuts(d));
    CAPTURE(d);
    CHECK(s0_of_delta(d) == doctest::Approx(-q / (2 * kPi)).epsilon(1e-10));
    const auto s = s0_split(d);
    CHECK(s.sigma1 * std::log(d) + s.sigma2 == doctest::Approx(s0_of_delta(d)).epsilon(1e-11));
  }
  CHECK(s0_split(0.0).sigma2 == doctest::Approx(-std::numbers::ln2 / kPi).epsilon(1e-15));
}

TEST_CASE("mode functions by quadrature") {
  const auto q = ak_bk_quad(0, 0.5);
  CHECK(q.a0 == doctest::Approx(a0_b0(0.5).a0).epsilon(1e-9));
  CHECK(q.b0 == doctest::Approx(a0_b0(0.5).b0).epsilon(1e-9));
  CHECK(std::abs(ak_bk_quad(8, 1.0).a0) < std::abs(ak_bk_quad(1, 1.0).a0));
  const auto b3 = ak_bk_quad(3, 0.1);
  CHECK(std::isfinite(b3.b0));
  CHECK(std::abs(b3.b0 - ab_oracle(3, 0.1).second) < 1e-10);
  for (int k : {1, 2, 5}) {
    for (double d : {0.01, 0.3, 2.0}) {
      const auto [ao, bo] = ab_oracle(k, d);
      const auto v = ak_bk_quad(k, d);
      CHECK(std::abs(v.a0 - ao) < 1e-10);
      CHECK(std::abs(v.b0 - bo) < 1e-10);
    }
  }
  CHECK_THROWS_AS(ak_bk_quad(-1, 0.5), DomainError);
  CHECK_THROWS_AS(ak_bk_quad(0, 0.0), DomainError);
}
