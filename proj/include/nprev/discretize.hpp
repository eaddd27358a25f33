#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nprev/geometry.hpp"

namespace nprev {

enum class KernelKind : std::uint32_t {
  np_mode0 = 0,
  single_layer_mode0 = 1,
  remainder = 2,
  np_planar = 3,
  log_part = 4,
};

std::string to_string(KernelKind kind);

/// A curve together with its Nystroem grid.
struct SampledCurve {
  GeneratingCurve curve;
  std::vector<CurveSample> samples;
  /// True when nodes are equispaced in t, so the periodic log rule applies.
  bool uniform = true;

  static SampledCurve make(const GeneratingCurve& curve, int n,
                           int grading_exponent = kDefaultGradingExponent);
  int size() const { return static_cast<int>(samples.size()); }
};

/// Dense discretization of a boundary integral operator:
///   (Op f)(p_i) ~ sum_j entries(i, j) * weights(j) * f(p_j).
/// `entries` are effective kernel values (including singular-quadrature
/// corrections), `weights` the arclength quadrature weights.
struct KernelMatrix {
  Eigen::MatrixXd entries;
  Eigen::VectorXd weights;
  KernelKind kind = KernelKind::np_mode0;
  int n = 0;
  std::uint64_t curve_id = 0;
  /// Graded-trapezoid fallback (corner curves): low-order accuracy.
  bool lower_order = false;

  /// Nystroem matrix acting on nodal values: entries * diag(weights).
  Eigen::MatrixXd nystrom() const { return entries * weights.asDiagonal(); }
};

struct AssemblyOptions {
  int threads = 1;
};

/// Periodic log quadrature weights R(i, j) for the factor
/// log(4 sin^2((t_i - t_j)/2)) on n equispaced nodes (n even, n >= 8):
///   int_0^{2pi} log(4 sin^2((t - s)/2)) phi(s) ds ~ sum_j R(i, j) phi(t_j).
Eigen::MatrixXd log_quadrature_weights(int n);

KernelMatrix assemble_K0(const SampledCurve& grid, const AssemblyOptions& opts = {});
KernelMatrix assemble_S0(const SampledCurve& grid, const AssemblyOptions& opts = {});

/// The three pieces of K0 = K_planar + (v_p/2y) S_planar + R on the same grid:
/// the planar NP kernel (trapezoid), the log part (v_p/4 pi y) log|p - q|
/// (log rule), and the bounded remainder (trapezoid).
KernelMatrix assemble_planar_np(const SampledCurve& grid, const AssemblyOptions& opts = {});
KernelMatrix assemble_log_part(const SampledCurve& grid, const AssemblyOptions& opts = {});
KernelMatrix assemble_remainder(const SampledCurve& grid, const AssemblyOptions& opts = {});

/// Pointwise kernel values on the grid (diagonal: continuous limit for
/// np_planar and remainder, 0 for the singular kinds).
Eigen::MatrixXd kernel_values(const SampledCurve& grid, KernelKind kind);

/// G = W^{1/2} (-S0) W^{1/2}.
Eigen::MatrixXd single_layer_gram(const KernelMatrix& s0);

/// A = W^{1/2} K0 W^{1/2}, similar to the Nystroem matrix of K0.
Eigen::MatrixXd weighted_operator(const KernelMatrix& k0);

/// Relative discrete Plemelj commutator ||G A - A^T G||_2 / (||G||_2 ||A||_2).
double plemelj_residual(const KernelMatrix& k0, const KernelMatrix& s0);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& m);

/// Binary dump: magic "NPREVMAT", u32 version, u32 n, u32 kind, u32 flags,
/// u64 curve hash, then n*n row-major f64 entries and n f64 weights,
/// all little-endian.
void write_kernel_matrix(const KernelMatrix& m, const std::string& path);
KernelMatrix read_kernel_matrix(const std::string& path);

}  // namespace nprev
