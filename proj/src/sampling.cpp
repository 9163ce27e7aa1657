#include "qht/sampling.hpp"

#include <algorithm>
#include <numeric>

namespace qht {

namespace {

Matrix gaussian(Index dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

}  // namespace

Matrix random_unitary(Index dim, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(dim, rng));
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

DensityOperator random_density(Index dim, Rng& rng, double floor) {
  const Matrix g = gaussian(dim, rng);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  m = (1.0 - floor) * m + floor / static_cast<double>(dim) * Matrix::Identity(dim, dim);
  return DensityOperator(HermitianOperator::from_computed(m));
}

PinchingSpec random_pinching(Index dim, int K, Rng& rng) {
  if (K < 1 || K > dim) throw Error(ErrorKind::InvalidArgument, "need 1 <= K <= dim");
  std::vector<int> labels(static_cast<std::size_t>(dim));
  std::iota(labels.begin(), labels.begin() + K, 0);
  std::uniform_int_distribution<int> pick(0, K - 1);
  for (std::size_t i = static_cast<std::size_t>(K); i < labels.size(); ++i) labels[i] = pick(rng);
  std::shuffle(labels.begin(), labels.end(), rng);
  return PinchingSpec::from_basis(random_unitary(dim, rng), std::move(labels));
}

}  // namespace qht
