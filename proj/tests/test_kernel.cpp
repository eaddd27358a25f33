#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nprev/errors.hpp"
#include "nprev/kernel.hpp"
#include "nprev/special_functions.hpp"
#include "support.hpp"

using namespace nprev;
using testing_support::kPi;

namespace {

std::vector<std::pair<int, int>> random_pairs(int n, int count, int min_gap, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> u(0, n - 1);
  std::vector<std::pair<int, int>> out;
  while (static_cast<int>(out.size()) < count) {
    const int i = u(rng), j = u(rng);
    const int gap = std::min(std::abs(i - j), n - std::abs(i - j));
    if (gap >= min_gap) out.emplace_back(i, j);
  }
  return out;
}

}  // namespace

TEST_CASE("planar kernel on a circle is constant") {
  for (double a : {0.5, 1.0, 1.7}) {
    const auto s = sample_curve(GeneratingCurve::circle(3.0, a), 64);
    for (int i = 0; i < 64; i += 5)
      for (int j = 0; j < 64; ++j) CHECK(np_kernel_2d(s[i], s[j]) == doctest::Approx(1 / (4 * kPi * a)).epsilon(1e-12));
  }
}

TEST_CASE("zeroth-mode kernel: closed form, reduced integral and full-circle integral agree") {
  for (const auto& [name, curve] : testing_support::full_catalog()) {
    const auto s = sample_curve(curve, 256);
    for (const auto& [i, j] : random_pairs(256, 100, 2, 5)) {
      CAPTURE(name);
      CAPTURE(i);
      CAPTURE(j);
      const double closed = k0_kernel(s[i], s[j]);
      const double scale = 1 + std::abs(closed);
      CHECK(std::abs(closed - kk_kernel_reduced(0, s[i], s[j])) < 1e-8 * scale);
      CHECK(std::abs(closed - testing_support::kk_full_circle(0, s[i], s[j])) < 1e-8 * scale);
    }
  }
}

TEST_CASE("first mode through both routes") {
  for (const auto& [name, curve] : testing_support::smooth_catalog()) {
    const auto s = sample_curve(curve, 128);
    for (const auto& [i, j] : random_pairs(128, 20, 2, 9)) {
      CAPTURE(name);
      const double a = kk_kernel(1, s[i], s[j]);
      CHECK(std::abs(a - kk_kernel_reduced(1, s[i], s[j])) < 1e-8 * (1 + std::abs(a)));
      CHECK(std::abs(a - testing_support::kk_full_circle(1, s[i], s[j])) < 1e-8 * (1 + std::abs(a)));
    }
  }
}

TEST_CASE("higher modes decay for separated points") {
  const auto s = sample_curve(testing_support::torus(), 64);
  const auto pairs = random_pairs(64, 30, 8, 3);
  double prev = 1e9, first = 0;
  for (int k : {0, 2, 4, 8, 16}) {
    double sup = 0;
    for (const auto& [i, j] : pairs) sup = std::max(sup, std::abs(kk_kernel_reduced(k, s[i], s[j])));
    CAPTURE(k);
    CHECK(sup < prev);
    if (k == 0) first = sup;
    prev = sup;
  }
  CHECK(prev < 0.1 * first);
}

TEST_CASE("kernel grows at most logarithmically near the diagonal") {
  for (const auto& [name, curve] : testing_support::smooth_catalog()) {
    const auto s = sample_curve(curve, 4096);
    double worst = 0;
    for (int i = 0; i < 4096; i += 256) {
      for (int g = 1; g < 2048; g *= 2) {
        const auto& q = s[(i + g) % 4096];
        const double r = (s[i].pos - q.pos).norm();
        worst = std::max(worst, std::abs(k0_kernel(s[i], q)) / (1 + std::abs(std::log(r))));
      }
    }
    CAPTURE(name);
    CHECK(worst < 1.0);
  }
}

TEST_CASE("coincident points are refused by the pointwise kernels") {
  const auto s = sample_curve(testing_support::torus(), 16);
  CHECK_THROWS_AS(k0_kernel(s[3], s[3]), SingularEvaluationError);
  CHECK_THROWS_AS(s0_kernel(s[3], s[3]), SingularEvaluationError);
  CHECK_THROWS_AS(kk_kernel_reduced(0, s[3], s[3]), SingularEvaluationError);
  CHECK(std::isnan(k0_split(s[3], s[3]).raw));
  CHECK(std::isfinite(k0_split(s[3], s[3]).smooth_part));
}

TEST_CASE("single-layer kernel: sign, symmetry, quadrature and far field") {
  for (const auto& [name, curve] : testing_support::smooth_catalog()) {
    const auto s = sample_curve(curve, 128);
    for (const auto& [i, j] : random_pairs(128, 40, 1, 21)) {
      CAPTURE(name);
      const double v = s0_kernel(s[i], s[j]);
      CHECK(v < 0);
      CHECK(v == s0_kernel(s[j], s[i]));
      CHECK(v == doctest::Approx(sk_kernel(0, s[i], s[j])).epsilon(1e-10));
    }
  }
  // K(i kappa) -> pi/2 as kappa -> 0, so delta * S0 -> -1/4
  for (double d : {1e3, 1e5}) CHECK(d * s0_of_delta(d) == doctest::Approx(-0.25).epsilon(1e-5));
}

TEST_CASE("split forms reproduce the raw kernels") {
  for (const auto& [name, curve] : testing_support::full_catalog()) {
    const auto s = sample_curve(curve, 128);
    for (const auto& [i, j] : random_pairs(128, 60, 1, 17)) {
      CAPTURE(name);
      const auto k = k0_split(s[i], s[j]);
      const double ref = k0_kernel(s[i], s[j]);
      CHECK(std::abs(k.raw - ref) < 1e-11 * (1 + std::abs(ref)));
      const double r = (s[i].pos - s[j].pos).norm();
      CHECK(std::abs(k.smooth_part + k.log_coefficient * std::log(r) - ref) < 1e-11 * (1 + std::abs(ref)));
      const auto sl = s0_split(s[i], s[j]);
      const double sref = s0_kernel(s[i], s[j]);
      CHECK(std::abs(sl.raw - sref) < 1e-11 * (1 + std::abs(sref)));
    }
  }
}

TEST_CASE("split smooth parts are continuous across the diagonal") {
  for (const auto& [name, curve] : testing_support::smooth_catalog()) {
    const int n = 1 << 14;
    const auto s = sample_curve(curve, n);
    for (int i : {0, n / 3, n / 2 + 7}) {
      const auto d = k0_split(s[i], s[i]);
      const auto sd = s0_split(s[i], s[i]);
      double prev_gap = 1e9;
      for (int g : {64, 16, 4, 1}) {
        const auto o = k0_split(s[i], s[(i + g) % n]);
        const double gap = std::abs(o.smooth_part - d.smooth_part);
        CAPTURE(name);
        CHECK(gap < prev_gap);
        CHECK(std::abs(o.log_coefficient - d.log_coefficient) < 1e-4);
        prev_gap = gap;
      }
      CHECK(prev_gap < 1e-3);
      CHECK(std::abs(s0_split(s[i], s[i + 1]).smooth_part - sd.smooth_part) < 1e-3);
    }
  }
}

TEST_CASE("remainder kernel: bounded, continuous diagonal, log-Lipschitz") {
  for (const auto& [name, curve] : testing_support::smooth_catalog()) {
    CAPTURE(name);
    const int n = 2048;
    const auto s = sample_curve(curve, n);
    for (int i : {0, 311, 1024, 1700}) {
      double lo = 1e9, hi = -1e9;
      for (int j = 0; j < n; ++j) {
        const double r = remainder_kernel(s[i], s[j]);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      CHECK(std::isfinite(lo));
      CHECK(std::isfinite(hi));
      // approach along the curve: Richardson on h, h/2 with O(h log h) error
      const double diag = remainder_kernel(s[i], s[i]);
      const double r1 = remainder_kernel(s[i], s[(i + 2) % n]);
      const double r2 = remainder_kernel(s[i], s[(i + 1) % n]);
      CHECK(std::abs(2 * r2 - r1 - diag) < 1e-3);
      CHECK(std::abs(r2 - diag) < 1e-2);
      // neighbour differences scale like h log(1/h)
      double mod_n = 0, mod_2n = 0;
      const auto s2 = sample_curve(curve, 2 * n);
      for (int j = 0; j < n; ++j) {
        const double h = 2 * kPi / n;
        mod_n = std::max(mod_n, std::abs(remainder_kernel(s[i], s[(j + 1) % n]) - remainder_kernel(s[i], s[j])) /
                                    (h * std::log(1 / h)));
        const int i2 = 2 * i, j2 = 2 * j;
        mod_2n = std::max(mod_2n, std::abs(remainder_kernel(s2[i2], s2[(j2 + 1) % (2 * n)]) -
                                           remainder_kernel(s2[i2], s2[j2])) /
                                      ((h / 2) * std::log(2 / h)));
      }
      CHECK(mod_2n < 1.5 * mod_n);
    }
  }
}

TEST_CASE("remainder diagonal on the torus") {
  const auto s = sample_curve(testing_support::torus(), 64);
  for (const auto& p : s) {
    const double expect = -p.v_p / (4 * kPi * p.pos.y()) * (2 * std::log(2.0) - 1 + std::log(2 * p.pos.y()));
    CHECK(remainder_kernel(p, p) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("kernels are invariant under reflection x -> -x") {
  const int n = 128;
  for (const auto& [name, curve] : {testing_support::NamedCurve{"torus", testing_support::torus()},
                                    testing_support::NamedCurve{"ellipse", GeneratingCurve::ellipse(3.0, 1.6, 0.9)}}) {
    const auto s = sample_curve(curve, n);
    auto mirror = [n](int i) { return ((n / 2 - i) % n + n) % n; };
    for (const auto& [i, j] : random_pairs(n, 50, 1, 33)) {
      CAPTURE(name);
      CHECK(s[mirror(i)].pos.x() == doctest::Approx(-s[i].pos.x()));
      CHECK(k0_kernel(s[mirror(i)], s[mirror(j)]) == doctest::Approx(k0_kernel(s[i], s[j])).epsilon(1e-12));
      CHECK(s0_kernel(s[mirror(i)], s[mirror(j)]) == doctest::Approx(s0_kernel(s[i], s[j])).epsilon(1e-12));
    }
  }
}
