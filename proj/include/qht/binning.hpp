#pragma once

// Geometric spectral binning: replaces a density by a finite-spectrum
// approximation F_k(d) with a^{-1} d <= F_k(d) <= a d, a = 1 + 1/k.

#include <span>
#include <vector>

#include "qht/operator_core.hpp"

namespace qht {

struct Bin {
  long index = 0;           // j, counted from the first occupied bin
  double lower_edge = 0.0;  // anchor * a^j
  HermitianOperator projector = HermitianOperator::identity(1);
  double value = 0.0;       // multiplicity-weighted mean of the eigenvalues inside
  int multiplicity = 0;
};

struct BinnedDensity {
  DensityOperator original = DensityOperator::maximally_mixed(1);
  int k = 1;
  double a = 2.0;
  double delta = 1.0;   // smallest eigenvalue of the original
  double anchor = 1.0;  // lower edge of the first bin
  std::vector<Bin> bins;
  DensityOperator binned = DensityOperator::maximally_mixed(1);

  std::size_t bin_count() const { return bins.size(); }
  /// 2 k delta^{-2}.
  double cardinality_bound() const;
};

/// Bins the spectrum on the global ladder a^m (m integer), anchored at the
/// rung just below the smallest eigenvalue. Since every bin spans one ratio a,
/// each eigenvalue is within a factor a of its bin's mean, and re-binning the
/// result leaves it unchanged.
/// Throws SingularDensity when the smallest eigenvalue is below 1e-12.
BinnedDensity bin_density(const DensityOperator& d, int k);

struct BinningGap {
  double alpha = 0.0;
  double gap = 0.0;
};

/// |D*_a(rho || eta) - D*_a(rho || F_k(eta))| for each alpha.
std::vector<BinningGap> binning_divergence_gap(const StatePair& pair, int k,
                                               std::span<const double> alphas);

}  // namespace qht
