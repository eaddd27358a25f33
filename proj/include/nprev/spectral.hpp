#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nprev/discretize.hpp"

namespace nprev {

/// Symmetric representative H = G^{1/2} A G^{-1/2} of the zeroth-mode NP
/// operator in the -S0 inner product, symmetrized as (H + H^T)/2.
struct SymmetrizedOperator {
  Eigen::MatrixXd matrix;
  /// ||H - H^T||_2 / ||H||_2 before symmetrization.
  double residual = 0.0;
  int n = 0;
  std::uint64_t curve_id = 0;
};

/// Throws NumericalError when G = W^{1/2}(-S0)W^{1/2} is not positive definite.
SymmetrizedOperator symmetrize(const KernelMatrix& k0, const KernelMatrix& s0);

/// Core similarity transform on raw matrices: G symmetric positive definite.
SymmetrizedOperator symmetrize(const Eigen::MatrixXd& a, const Eigen::MatrixXd& g);

enum class SpectrumRoute { symmetrized, nystrom };

struct SpectrumResult {
  std::vector<double> all_eigs;  // signed, sorted by descending modulus, zeros dropped
  std::vector<double> pos_eigs;  // rho_j^+, descending
  std::vector<double> neg_eigs;  // rho_j^-, magnitudes, descending
  int zero_count = 0;
  int n = 0;
  double symmetrization_residual = 0.0;
  std::uint64_t curve_id = 0;
  std::optional<Eigen::MatrixXd> eigenvectors;  // columns ordered like all_eigs
  /// Corner curves skip the symmetrization (the graded-mesh Gram matrix is
  /// too ill-conditioned) and take real parts of the Nystroem eigenvalues.
  SpectrumRoute route = SpectrumRoute::symmetrized;
  double max_imag = 0.0;  // largest discarded imaginary part (nystrom route)

  /// max |rho| exceeds 1/2 (beyond round-off).
  bool exceeds_half() const;
};

/// Relative threshold below which eigenvalues count as zero.
inline constexpr double kZeroEigenvalueThreshold = 1e-13;

SpectrumResult eigen_spectrum(const SymmetrizedOperator& h, bool keep_vectors = false);

/// Signed eigenvalues to SpectrumResult (sorting, zero threshold, sign split).
SpectrumResult classify_eigenvalues(const std::vector<double>& values, int n, std::uint64_t curve_id);

/// Full pipeline: assemble K0 and S0 on an n-point grid, symmetrize, solve.
/// Corner curves use the Nystroem route on the graded grid instead.
SpectrumResult compute_spectrum(const GeneratingCurve& curve, int n, const AssemblyOptions& opts = {});

/// Eigenvalues of the non-symmetric Nystroem matrix of K0 (independent route);
/// real parts sorted by descending modulus. `max_imag` receives the largest
/// imaginary part encountered.
std::vector<double> nonsymmetric_eigenvalues(const KernelMatrix& k0, double* max_imag = nullptr);

/// Eigenvalues of a plain (e.g. planar NP) Nystroem matrix, by modulus.
std::vector<double> nystrom_eigenvalues(const KernelMatrix& m, double* max_imag = nullptr);

}  // namespace nprev
