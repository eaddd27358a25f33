#include "nprev/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nprev/errors.hpp"
#include "nprev/quadrature.hpp"
#include "nprev/special_functions.hpp"

namespace nprev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_distinct(const CurveSample& p, const CurveSample& q, const char* what) {
  if (coincident(p, q))
    throw SingularEvaluationError(std::string(what) + ": coincident points; use the split form");
}

double log_weight(const CurveSample& p) { return p.v_p / (4 * kPi * p.pos.y()); }

}  // namespace

bool coincident(const CurveSample& p, const CurveSample& q) { return p.pos == q.pos; }

double np_kernel_2d(const CurveSample& p, const CurveSample& q) {
  if (coincident(p, q)) return p.curvature / (4 * kPi);
  const Point d = p.pos - q.pos;
  return d.dot(p.normal) / (2 * kPi * d.squaredNorm());
}

double k0_kernel(const CurveSample& p, const CurveSample& q) {
  require_distinct(p, q, "k0_kernel");
  const auto ab = a0_b0(delta(p.pos, q.pos));
  return np_kernel_2d(p, q) * ab.a0 - log_weight(p) * ab.b0;
}

double kk_kernel(int k, const CurveSample& p, const CurveSample& q) {
  require_distinct(p, q, "kk_kernel");
  if (k == 0) return k0_kernel(p, q);
  const auto ab = ak_bk_quad(k, delta(p.pos, q.pos));
  return np_kernel_2d(p, q) * ab.a0 - log_weight(p) * ab.b0;
}

double kk_kernel_reduced(int k, const CurveSample& p, const CurveSample& q) {
  require_distinct(p, q, "kk_kernel_reduced");
  if (k < 0) throw DomainError("kk_kernel_reduced: mode index must be >= 0");
  const Point d = p.pos - q.pos;
  const double dn = d.dot(p.normal);
  const double r2 = d.squaredNorm();
  const double y = p.pos.y(), yq = q.pos.y();
  const double dl = delta(p.pos, q.pos);
  auto integrand = [&](double phi) {
    const double s2 = std::sin(phi) * std::sin(phi);
    const double den = r2 + 4 * y * yq * s2;
    return std::cos(2 * k * phi) * (dn - 2 * p.v_p * yq * s2) / (den * std::sqrt(den));
  };
  std::vector<double> bp;
  for (double x = dl; x < kPi / 2; x *= 4) bp.push_back(x);
  const double scale = std::sqrt(y * yq) / kPi;
  const auto est = quadrature::integrate<double>(integrand, 0.0, kPi / 2, 1e-13 / scale, 1e-14, bp);
  return scale * est.value;
}

double s0_kernel(const CurveSample& p, const CurveSample& q) {
  require_distinct(p, q, "s0_kernel");
  return s0_of_delta(delta(p.pos, q.pos));
}

double sk_kernel(int k, const CurveSample& p, const CurveSample& q) {
  require_distinct(p, q, "sk_kernel");
  return -sk_integral_quad(k, delta(p.pos, q.pos)) / (2 * kPi);
}

KernelSplit k0_split(const CurveSample& p, const CurveSample& q) {
  const bool diag = coincident(p, q);
  const double dl = diag ? 0.0 : delta(p.pos, q.pos);
  const auto s = a0_b0_split(dl);
  const double kp = np_kernel_2d(p, q);
  const double w = log_weight(p);
  const double half_log_4yy = 0.5 * std::log(4 * p.pos.y() * q.pos.y());
  KernelSplit out;
  out.log_coefficient = kp * s.alpha1 - w * s.beta1;
  out.smooth_part = kp * (1 + s.alpha2) - w * s.beta2 - out.log_coefficient * half_log_4yy;
  out.raw = diag ? kNaN : out.smooth_part + out.log_coefficient * std::log((p.pos - q.pos).norm());
  return out;
}

KernelSplit s0_split(const CurveSample& p, const CurveSample& q) {
  const bool diag = coincident(p, q);
  const double dl = diag ? 0.0 : delta(p.pos, q.pos);
  const auto s = nprev::s0_split(dl);
  const double half_log_4yy = 0.5 * std::log(4 * p.pos.y() * q.pos.y());
  KernelSplit out;
  out.log_coefficient = s.sigma1;
  out.smooth_part = s.sigma2 - s.sigma1 * half_log_4yy;
  out.raw = diag ? kNaN : out.smooth_part + out.log_coefficient * std::log((p.pos - q.pos).norm());
  return out;
}

double remainder_kernel(const CurveSample& p, const CurveSample& q) {
  const double w = log_weight(p);
  if (coincident(p, q)) return -w * (2 * std::numbers::ln2 - 1 + std::log(2 * p.pos.y()));
  const double dl = delta(p.pos, q.pos);
  const auto s = a0_b0_split(dl);
  const double ld = std::log(dl);
  // K_planar (A0 - 1) - w (B0 + log|p - q|), with log|p - q| = log delta + log(2 sqrt(y y'))
  const double a0m1 = s.alpha1 * ld + s.alpha2;
  const double b0_plus_log = (s.beta1 + 1) * ld + s.beta2 + 0.5 * std::log(4 * p.pos.y() * q.pos.y());
  return np_kernel_2d(p, q) * a0m1 - w * b0_plus_log;
}

}  // namespace nprev
