#pragma once

#include <vector>

#include "nprev/spectral.hpp"

namespace nprev {

/// Interval [-b, b] that the essential spectrum of the 3-D operator contains
/// when the generating curve is a C^2 curvilinear polygon.
struct CornerPrediction {
  std::vector<double> angles;
  double b = 0.0;  // max_i |1/2 - alpha_i / 2pi|
  double lower() const { return -b; }
  double upper() const { return b; }
};

CornerPrediction essential_bound(const std::vector<double>& angles);

struct ClusteringOptions {
  int bins = 20;
  double margin = 0.02;
  /// Eigenvalues with |rho| below this accumulate at 0 for any compact
  /// operator and are left out of the outer totals.
  double zero_exclusion = 0.05;
};

/// Eigenvalue counts per bin of a uniform partition of [lo, hi], one row per
/// grid size. A bin "grows" when its counts never decrease over increasing n
/// and end strictly above where they started.
struct ClusteringReport {
  double lo = 0.0, hi = 0.0;
  std::vector<double> bin_edges;
  std::vector<int> grid_sizes;
  std::vector<std::vector<int>> counts;  // [grid][bin]
  std::vector<int> totals;               // per grid, all bins
  std::vector<bool> bin_grows;
  bool total_strictly_increasing = false;
  bool total_stable = false;  // all totals equal
  /// Per grid: eigenvalues with zero_exclusion <= |rho| <= hi.
  double zero_exclusion = 0.0;
  std::vector<int> outer_totals;
  bool outer_strictly_increasing = false;
  bool outer_stable = false;
};

/// Diagnostic over [-b + margin, b - margin]. Requires >= 3 spectra of the
/// same curve with strictly increasing n.
ClusteringReport clustering_diagnostic(const std::vector<SpectrumResult>& spectra, const CornerPrediction& prediction,
                                       const ClusteringOptions& opts = {});

/// Same diagnostic on an explicit interval [lo, hi].
ClusteringReport clustering_diagnostic(const std::vector<SpectrumResult>& spectra, double lo, double hi,
                                       int bins = 20, double zero_exclusion = 0.05);

int count_in_interval(const SpectrumResult& spectrum, double lo, double hi);

}  // namespace nprev
