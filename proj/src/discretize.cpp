#include "nprev/discretize.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>

#include "nprev/errors.hpp"
#include "nprev/kernel.hpp"

namespace nprev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr char kMagic[8] = {'N', 'P', 'R', 'E', 'V', 'M', 'A', 'T'};
constexpr std::uint32_t kDumpVersion = 1;

template <typename RowFn>
void for_each_row(int n, int threads, RowFn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) fn(i);
    });
}

// log|p - q| - (1/2) log(4 sin^2((t_p - t_q)/2)), smooth on a uniform grid.
double log_ratio(const CurveSample& p, const CurveSample& q) {
  if (coincident(p, q)) return std::log(p.speed);
  const double s = 2 * std::sin((p.t - q.t) / 2);
  return std::log((p.pos - q.pos).norm() / std::abs(s));
}

// Effective entries for a split kernel. Uniform grids: periodic log rule.
// Graded grids: raw values off the diagonal, local-panel average on it.
template <typename SplitFn>
Eigen::MatrixXd assemble_split(const SampledCurve& grid, const AssemblyOptions& opts, SplitFn&& split) {
  const int n = grid.size();
  const auto& s = grid.samples;
  Eigen::MatrixXd out(n, n);
  if (grid.uniform) {
    const Eigen::MatrixXd R = log_quadrature_weights(n);
    const double h = 2 * kPi / n;
    for_each_row(n, opts.threads, [&](int i) {
      for (int j = 0; j < n; ++j) {
        const KernelSplit ks = split(s[i], s[j]);
        // coefficient * log|p-q| = (coefficient/2) log(4 sin^2) + coefficient * log_ratio
        const double a = ks.log_coefficient / 2;
        const double b = ks.smooth_part + ks.log_coefficient * log_ratio(s[i], s[j]);
        out(i, j) = R(i, j) * a / h + b;
      }
    });
  } else {
    for_each_row(n, opts.threads, [&](int i) {
      for (int j = 0; j < n; ++j) {
        const KernelSplit ks = split(s[i], s[j]);
        if (i != j) {
          out(i, j) = ks.raw;
        } else {
          const double w = s[i].weight * s[i].speed;
          out(i, j) = ks.smooth_part + ks.log_coefficient * (std::log(w / 2) - 1);
        }
      }
    });
  }
  return out;
}

KernelMatrix wrap(const SampledCurve& grid, Eigen::MatrixXd entries, KernelKind kind) {
  KernelMatrix m;
  m.n = grid.size();
  m.entries = std::move(entries);
  m.weights.resize(m.n);
  for (int j = 0; j < m.n; ++j) m.weights(j) = grid.samples[j].weight * grid.samples[j].speed;
  m.kind = kind;
  m.curve_id = grid.curve.fingerprint();
  m.lower_order = !grid.uniform;
  return m;
}

template <typename T>
void put(std::ofstream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw NumericalError("kernel matrix dump is truncated");
  return v;
}

}  // namespace

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::np_mode0: return "np_mode0";
    case KernelKind::single_layer_mode0: return "single_layer_mode0";
    case KernelKind::remainder: return "remainder";
    case KernelKind::np_planar: return "np_planar";
    case KernelKind::log_part: return "log_part";
  }
  return "unknown";
}

SampledCurve SampledCurve::make(const GeneratingCurve& curve, int n, int grading_exponent) {
  SampledCurve g{curve, sample_curve(curve, n, grading_exponent), !curve.has_corners()};
  return g;
}

Eigen::MatrixXd log_quadrature_weights(int n) {
  if (n < 8 || n % 2 != 0) throw DomainError("log_quadrature_weights: n must be even and >= 8");
  const int half = n / 2;
  Eigen::VectorXd r(n);
  for (int k = 0; k < n; ++k) {
    const double tk = 2 * kPi * k / n;
    double sum = 0;
    for (int m = 1; m < half; ++m) sum += std::cos(m * tk) / m;
    r(k) = -(2 * kPi / half) * sum - (kPi / (double(half) * half)) * std::cos(half * tk);
  }
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = r((i - j + n) % n);
  return R;
}

KernelMatrix assemble_K0(const SampledCurve& grid, const AssemblyOptions& opts) {
  Eigen::MatrixXd e = assemble_split(grid, opts, k0_split);
  if (!grid.uniform) {
    // Modified Nystroem: drop the interaction of the two nodes that straddle
    // each corner. Without it the graded rule carries a spurious eigenvalue
    // per corner near -0.48.
    const auto& s = grid.samples;
    const int n = grid.size();
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      if (s[i].segment != s[j].segment) e(i, j) = e(j, i) = 0.0;
    }
  }
  return wrap(grid, std::move(e), KernelKind::np_mode0);
}

KernelMatrix assemble_S0(const SampledCurve& grid, const AssemblyOptions& opts) {
  return wrap(grid, assemble_split(grid, opts, s0_split), KernelKind::single_layer_mode0);
}

KernelMatrix assemble_planar_np(const SampledCurve& grid, const AssemblyOptions& opts) {
  const int n = grid.size();
  Eigen::MatrixXd e(n, n);
  for_each_row(n, opts.threads, [&](int i) {
    for (int j = 0; j < n; ++j) e(i, j) = np_kernel_2d(grid.samples[i], grid.samples[j]);
  });
  return wrap(grid, std::move(e), KernelKind::np_planar);
}

KernelMatrix assemble_log_part(const SampledCurve& grid, const AssemblyOptions& opts) {
  auto split = [](const CurveSample& p, const CurveSample& q) {
    const double w = p.v_p / (4 * kPi * p.pos.y());
    KernelSplit ks{0.0, w, 0.0};
    ks.raw = coincident(p, q) ? std::numeric_limits<double>::quiet_NaN() : w * std::log((p.pos - q.pos).norm());
    return ks;
  };
  return wrap(grid, assemble_split(grid, opts, split), KernelKind::log_part);
}

KernelMatrix assemble_remainder(const SampledCurve& grid, const AssemblyOptions& opts) {
  const int n = grid.size();
  Eigen::MatrixXd e(n, n);
  for_each_row(n, opts.threads, [&](int i) {
    for (int j = 0; j < n; ++j) e(i, j) = remainder_kernel(grid.samples[i], grid.samples[j]);
  });
  return wrap(grid, std::move(e), KernelKind::remainder);
}

Eigen::MatrixXd kernel_values(const SampledCurve& grid, KernelKind kind) {
  const int n = grid.size();
  const auto& s = grid.samples;
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool diag = coincident(s[i], s[j]);
      switch (kind) {
        case KernelKind::np_mode0: out(i, j) = diag ? 0.0 : k0_kernel(s[i], s[j]); break;
        case KernelKind::single_layer_mode0: out(i, j) = diag ? 0.0 : s0_kernel(s[i], s[j]); break;
        case KernelKind::remainder: out(i, j) = remainder_kernel(s[i], s[j]); break;
        case KernelKind::np_planar: out(i, j) = np_kernel_2d(s[i], s[j]); break;
        case KernelKind::log_part:
          out(i, j) = diag ? 0.0 : s[i].v_p / (4 * kPi * s[i].pos.y()) * std::log((s[i].pos - s[j].pos).norm());
          break;
      }
    }
  }
  return out;
}

Eigen::MatrixXd single_layer_gram(const KernelMatrix& s0) {
  const Eigen::VectorXd r = s0.weights.cwiseSqrt();
  return -(r.asDiagonal() * s0.entries * r.asDiagonal());
}

Eigen::MatrixXd weighted_operator(const KernelMatrix& k0) {
  const Eigen::VectorXd r = k0.weights.cwiseSqrt();
  return r.asDiagonal() * k0.entries * r.asDiagonal();
}

double spectral_norm(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double plemelj_residual(const KernelMatrix& k0, const KernelMatrix& s0) {
  if (k0.n != s0.n) throw DomainError("plemelj_residual: size mismatch");
  const Eigen::MatrixXd G = single_layer_gram(s0);
  const Eigen::MatrixXd A = weighted_operator(k0);
  const Eigen::MatrixXd C = G * A - A.transpose() * G;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(G, Eigen::EigenvaluesOnly);
  const double g_norm = gs.eigenvalues().cwiseAbs().maxCoeff();
  return spectral_norm(C) / (g_norm * spectral_norm(A));
}

void write_kernel_matrix(const KernelMatrix& m, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, kDumpVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(m.n));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(m.kind));
  put<std::uint32_t>(os, m.lower_order ? 1u : 0u);
  put<std::uint64_t>(os, m.curve_id);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) put<double>(os, m.entries(i, j));
  for (int j = 0; j < m.n; ++j) put<double>(os, m.weights(j));
  if (!os) throw std::runtime_error("write failed: " + path);
}

KernelMatrix read_kernel_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw NumericalError("bad kernel matrix magic");
  if (get<std::uint32_t>(is) != kDumpVersion) throw NumericalError("unsupported kernel matrix version");
  KernelMatrix m;
  m.n = static_cast<int>(get<std::uint32_t>(is));
  const auto kind = get<std::uint32_t>(is);
  if (kind > static_cast<std::uint32_t>(KernelKind::log_part)) throw NumericalError("bad kernel kind");
  m.kind = static_cast<KernelKind>(kind);
  m.lower_order = get<std::uint32_t>(is) != 0;
  m.curve_id = get<std::uint64_t>(is);
  m.entries.resize(m.n, m.n);
  m.weights.resize(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) m.entries(i, j) = get<double>(is);
  for (int j = 0; j < m.n; ++j) m.weights(j) = get<double>(is);
  is.peek();
  if (!is.eof()) throw NumericalError("trailing bytes in kernel matrix dump");
  return m;
}

}  // namespace nprev
