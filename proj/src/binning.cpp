#include "qht/binning.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "qht/divergence.hpp"

namespace qht {

namespace {

// Bin index of an eigenvalue; the slack keeps values sitting exactly on an
// edge (up to rounding in the logarithm) in the bin they start.
long ladder_index(double lambda, double log_a) {
  return static_cast<long>(std::floor(std::log(lambda) / log_a + 1e-9));
}

}  // namespace

double BinnedDensity::cardinality_bound() const { return 2.0 * k / (delta * delta); }

BinnedDensity bin_density(const DensityOperator& d, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be a positive integer");
  const double delta = d.min_eigenvalue();
  if (delta < kFullRankTol) {
    std::ostringstream os;
    os << "smallest eigenvalue " << delta << " below 1e-12";
    throw Error(ErrorKind::SingularDensity, os.str());
  }
  const double log_a = std::log1p(1.0 / k);
  const RealVector& values = d.eigenvalues();
  const Matrix& vectors = d.eigenvectors();

  std::map<long, std::vector<Index>> members;
  for (Index i = 0; i < values.size(); ++i) members[ladder_index(values(i), log_a)].push_back(i);

  BinnedDensity out;
  out.original = d;
  out.k = k;
  out.a = 1.0 + 1.0 / k;
  out.delta = delta;
  out.anchor = std::exp(members.begin()->first * log_a);

  RealVector binned_values(values.size());
  for (const auto& [j, idx] : members) {
    double sum = 0.0;
    Matrix proj = Matrix::Zero(d.dim(), d.dim());
    for (Index i : idx) {
      sum += values(i);
      proj += vectors.col(i) * vectors.col(i).adjoint();
    }
    const double mean = sum / static_cast<double>(idx.size());
    for (Index i : idx) binned_values(i) = mean;
    Bin bin;
    bin.index = j - members.begin()->first;
    bin.lower_edge = std::exp(j * log_a);
    bin.projector = HermitianOperator::from_computed(proj);
    bin.value = mean;
    bin.multiplicity = static_cast<int>(idx.size());
    out.bins.push_back(std::move(bin));
  }
  out.binned = density_from_eigensystem(binned_values, vectors);
  return out;
}

std::vector<BinningGap> binning_divergence_gap(const StatePair& pair, int k,
                                               std::span<const double> alphas) {
  const BinnedDensity b = bin_density(pair.eta(), k);
  const SandwichEvaluator original(pair);
  const SandwichEvaluator binned(StatePair(pair.rho(), b.binned));
  std::vector<BinningGap> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    const double scale = alpha / (alpha - 1.0);
    const double d0 = std::max(scale * original.log_q_star(alpha), 0.0);
    const double d1 = std::max(scale * binned.log_q_star(alpha), 0.0);
    out.push_back({alpha, std::abs(d0 - d1)});
  }
  return out;
}

}  // namespace qht
