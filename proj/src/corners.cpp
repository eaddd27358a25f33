#include "nprev/corners.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nprev/errors.hpp"

namespace nprev {

CornerPrediction essential_bound(const std::vector<double>& angles) {
  CornerPrediction p;
  p.angles = angles;
  if (angles.empty()) throw DomainError("essential_bound: no corners");
  for (double a : angles) {
    if (!(a > 0 && a < 2 * std::numbers::pi)) throw DomainError("essential_bound: interior angle outside (0, 2pi)");
    p.b = std::max(p.b, std::abs(0.5 - a / (2 * std::numbers::pi)));
  }
  return p;
}

int count_in_interval(const SpectrumResult& spectrum, double lo, double hi) {
  return static_cast<int>(
      std::count_if(spectrum.all_eigs.begin(), spectrum.all_eigs.end(), [&](double v) { return v >= lo && v < hi; }));
}

ClusteringReport clustering_diagnostic(const std::vector<SpectrumResult>& spectra, double lo, double hi, int bins,
                                       double zero_exclusion) {
  if (spectra.size() < 3) throw DomainError("clustering_diagnostic: need at least 3 grid sizes");
  if (bins < 1) throw DomainError("clustering_diagnostic: bins must be positive");
  for (std::size_t i = 1; i < spectra.size(); ++i) {
    if (spectra[i].curve_id != spectra[0].curve_id)
      throw DomainError("clustering_diagnostic: spectra come from different curves");
    if (spectra[i].n <= spectra[i - 1].n) throw DomainError("clustering_diagnostic: grid sizes must increase");
  }
  ClusteringReport r;
  r.lo = lo;
  r.hi = hi;
  const bool empty = !(hi > lo);
  const int nb = empty ? 0 : bins;
  for (int k = 0; k <= nb; ++k) r.bin_edges.push_back(lo + (hi - lo) * k / std::max(nb, 1));
  for (const auto& s : spectra) {
    r.grid_sizes.push_back(s.n);
    std::vector<int> row(nb, 0);
    for (double v : s.all_eigs) {
      if (empty || v < lo || v >= hi) continue;
      int k = static_cast<int>((v - lo) / (hi - lo) * nb);
      row[std::min(k, nb - 1)]++;
    }
    int total = 0;
    for (int c : row) total += c;
    r.counts.push_back(std::move(row));
    r.totals.push_back(total);
    const double top = std::max(std::abs(lo), std::abs(hi));
    r.outer_totals.push_back(static_cast<int>(std::count_if(s.all_eigs.begin(), s.all_eigs.end(), [&](double v) {
      return v >= lo && v <= hi && std::abs(v) >= zero_exclusion && std::abs(v) <= top;
    })));
  }
  r.zero_exclusion = zero_exclusion;
  for (int k = 0; k < nb; ++k) {
    bool nondecreasing = true;
    for (std::size_t g = 1; g < spectra.size(); ++g) nondecreasing &= r.counts[g][k] >= r.counts[g - 1][k];
    r.bin_grows.push_back(nondecreasing && r.counts.back()[k] > r.counts.front()[k]);
  }
  r.total_strictly_increasing = r.total_stable = true;
  r.outer_strictly_increasing = r.outer_stable = true;
  for (std::size_t g = 1; g < spectra.size(); ++g) {
    r.total_strictly_increasing &= r.totals[g] > r.totals[g - 1];
    r.total_stable &= r.totals[g] == r.totals[0];
    r.outer_strictly_increasing &= r.outer_totals[g] > r.outer_totals[g - 1];
    r.outer_stable &= r.outer_totals[g] == r.outer_totals[0];
  }
  return r;
}

ClusteringReport clustering_diagnostic(const std::vector<SpectrumResult>& spectra, const CornerPrediction& prediction,
                                       const ClusteringOptions& opts) {
  if (opts.margin < 0) throw DomainError("clustering_diagnostic: margin must be non-negative");
  return clustering_diagnostic(spectra, -prediction.b + opts.margin, prediction.b - opts.margin, opts.bins,
                               opts.zero_exclusion);
}

}  // namespace nprev
