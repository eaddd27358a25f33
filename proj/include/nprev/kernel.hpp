#pragma once

#include "nprev/geometry.hpp"

namespace nprev {

/// Kernel value split around its logarithmic singularity:
///   raw = smooth_part + log_coefficient * log|p - q|   (p != q).
/// At p == q, `raw` is NaN and `smooth_part` holds the continuous limit of
/// raw - log_coefficient * log|p - q|.
struct KernelSplit {
  double smooth_part;
  double log_coefficient;
  double raw;
};

bool coincident(const CurveSample& p, const CurveSample& q);

/// Planar NP kernel (1/2pi) (p - q).n_p / |p - q|^2; at p == q the
/// continuous extension curvature(p) / (4 pi).
double np_kernel_2d(const CurveSample& p, const CurveSample& q);

/// Zeroth-mode kernel K0*(p, q) = K_planar A0(delta) - (v_p / 4 pi y) B0(delta).
/// Throws SingularEvaluationError at p == q.
double k0_kernel(const CurveSample& p, const CurveSample& q);

/// Mode-k kernel through A_k, B_k (adaptive quadrature of their integrals).
double kk_kernel(int k, const CurveSample& p, const CurveSample& q);

/// Mode-k kernel by direct quadrature of the reduced phi-integral over [0, pi/2].
double kk_kernel_reduced(int k, const CurveSample& p, const CurveSample& q);

/// Zeroth-mode single-layer kernel -K(i/delta) / (2 pi delta).
double s0_kernel(const CurveSample& p, const CurveSample& q);

/// Mode-k single-layer kernel by adaptive quadrature.
double sk_kernel(int k, const CurveSample& p, const CurveSample& q);

/// R*(p, q) = K0*(p, q) - K_planar(p, q) - (v_p / 4 pi y) log|p - q|, with the
/// continuous extension -(v_p / 4 pi y)(2 log 2 - 1 + log(2y)) at p == q.
double remainder_kernel(const CurveSample& p, const CurveSample& q);

/// Split forms used by the Nystroem assembly; valid for every pair
/// including the diagonal.
KernelSplit k0_split(const CurveSample& p, const CurveSample& q);
KernelSplit s0_split(const CurveSample& p, const CurveSample& q);

}  // namespace nprev
