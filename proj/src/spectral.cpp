#include "nprev/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "nprev/errors.hpp"

namespace nprev {

SymmetrizedOperator symmetrize(const Eigen::MatrixXd& a, const Eigen::MatrixXd& g) {
  if (a.rows() != a.cols() || g.rows() != g.cols() || a.rows() != g.rows())
    throw DomainError("symmetrize: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success) throw NumericalError("symmetrize: eigensolver failed on G");
  const Eigen::VectorXd lam = es.eigenvalues();
  if (!(lam.minCoeff() > 0))
    throw NumericalError("symmetrize: -S0 Gram matrix is not positive definite (min eigenvalue " +
                         std::to_string(lam.minCoeff()) + ")");
  const Eigen::MatrixXd& U = es.eigenvectors();
  const Eigen::MatrixXd root = U * lam.cwiseSqrt().asDiagonal() * U.transpose();
  const Eigen::MatrixXd inv_root = U * lam.cwiseSqrt().cwiseInverse().asDiagonal() * U.transpose();
  const Eigen::MatrixXd h = root * a * inv_root;
  SymmetrizedOperator out;
  const double norm = spectral_norm(h);
  out.residual = norm > 0 ? spectral_norm(h - h.transpose()) / norm : 0.0;
  out.matrix = (h + h.transpose()) / 2;
  out.n = static_cast<int>(a.rows());
  return out;
}

SymmetrizedOperator symmetrize(const KernelMatrix& k0, const KernelMatrix& s0) {
  if (k0.kind != KernelKind::np_mode0 || s0.kind != KernelKind::single_layer_mode0)
    throw DomainError("symmetrize: expected (np_mode0, single_layer_mode0) matrices");
  if (k0.curve_id != s0.curve_id || k0.n != s0.n) throw DomainError("symmetrize: matrices from different grids");
  SymmetrizedOperator out = symmetrize(weighted_operator(k0), single_layer_gram(s0));
  out.curve_id = k0.curve_id;
  return out;
}

namespace {

bool by_modulus(double a, double b) {
  const double ma = std::abs(a), mb = std::abs(b);
  return ma != mb ? ma > mb : a > b;
}

}  // namespace

bool SpectrumResult::exceeds_half() const {
  return !all_eigs.empty() && std::abs(all_eigs.front()) > 0.5 + 1e-8;
}

SpectrumResult eigen_spectrum(const SymmetrizedOperator& h, bool keep_vectors) {
  const Eigen::MatrixXd& m = h.matrix;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 0)
    throw DomainError("eigen_spectrum: input is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m, keep_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigen_spectrum: symmetric eigensolver did not converge");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const int n = static_cast<int>(lam.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return by_modulus(lam(a), lam(b)); });
  SpectrumResult r = classify_eigenvalues(std::vector<double>(lam.data(), lam.data() + n), h.n, h.curve_id);
  r.symmetrization_residual = h.residual;
  if (keep_vectors) {
    const double cut = kZeroEigenvalueThreshold * (n ? std::abs(lam(order[0])) : 0.0);
    Eigen::MatrixXd vecs(n, static_cast<Eigen::Index>(r.all_eigs.size()));
    Eigen::Index c = 0;
    for (int i : order)
      if (std::abs(lam(i)) >= cut) vecs.col(c++) = es.eigenvectors().col(i);
    r.eigenvectors = std::move(vecs);
  }
  return r;
}

SpectrumResult classify_eigenvalues(const std::vector<double>& values, int n, std::uint64_t curve_id) {
  std::vector<double> v = values;
  std::stable_sort(v.begin(), v.end(), by_modulus);
  SpectrumResult r;
  r.n = n;
  r.curve_id = curve_id;
  const double cut = kZeroEigenvalueThreshold * (v.empty() ? 0.0 : std::abs(v.front()));
  for (double x : v) {
    if (std::abs(x) < cut) {
      ++r.zero_count;
      continue;
    }
    r.all_eigs.push_back(x);
    (x > 0 ? r.pos_eigs : r.neg_eigs).push_back(std::abs(x));
  }
  return r;
}

SpectrumResult compute_spectrum(const GeneratingCurve& curve, int n, const AssemblyOptions& opts) {
  const SampledCurve grid = SampledCurve::make(curve, n);
  const KernelMatrix k0 = assemble_K0(grid, opts);
  if (!grid.uniform) {
    double imag = 0;
    SpectrumResult r = classify_eigenvalues(nonsymmetric_eigenvalues(k0, &imag), n, k0.curve_id);
    r.route = SpectrumRoute::nystrom;
    r.max_imag = imag;
    r.symmetrization_residual = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const KernelMatrix s0 = assemble_S0(grid, opts);
  return eigen_spectrum(symmetrize(k0, s0));
}

std::vector<double> nystrom_eigenvalues(const KernelMatrix& m, double* max_imag) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(weighted_operator(m), false);
  if (es.info() != Eigen::Success) throw NumericalError("nonsymmetric eigensolver did not converge");
  std::vector<double> out;
  double imag = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    out.push_back(es.eigenvalues()(i).real());
    imag = std::max(imag, std::abs(es.eigenvalues()(i).imag()));
  }
  std::sort(out.begin(), out.end(), by_modulus);
  if (max_imag) *max_imag = imag;
  return out;
}

std::vector<double> nonsymmetric_eigenvalues(const KernelMatrix& k0, double* max_imag) {
  if (k0.kind != KernelKind::np_mode0) throw DomainError("nonsymmetric_eigenvalues: expected np_mode0 matrix");
  return nystrom_eigenvalues(k0, max_imag);
}

}  // namespace nprev
