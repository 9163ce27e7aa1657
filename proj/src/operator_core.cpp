#include "qht/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qht {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_square(const Matrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorKind::DimMismatch, "operator must be a non-empty square matrix, got " +
                                            std::to_string(m.rows()) + "x" +
                                            std::to_string(m.cols()));
  }
}

}  // namespace

Matrix Eigensystem::reconstruct() const {
  return detail::from_eigensystem(values, vectors);
}

HermitianOperator::HermitianOperator(Matrix m) : m_(std::move(m)) {
  require_square(m_);
  const Index d = m_.rows();
  double worst = 0.0;
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(m_(i, j) - std::conj(m_(j, i))));
    }
  }
  if (!(worst <= kHermitianTol)) {
    throw Error(ErrorKind::NonHermitian,
                "max |m(i,j) - conj(m(j,i))| = " + fmt_double(worst) + " exceeds 1e-10");
  }
}

HermitianOperator HermitianOperator::from_computed(const Matrix& m) {
  require_square(m);
  Matrix h = 0.5 * (m + m.adjoint());
  return HermitianOperator(std::move(h), Trusted{});
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::diagonal(const RealVector& diag) {
  Matrix m = Matrix::Zero(diag.size(), diag.size());
  m.diagonal() = diag.cast<Complex>();
  return HermitianOperator(std::move(m), Trusted{});
}

namespace detail {

Eigensystem eigh_matrix(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure,
                "Hermitian eigensolver did not converge (dim " + std::to_string(m.rows()) + ")");
  }
  Eigensystem out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

RealVector eigvalsh_matrix(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure,
                "Hermitian eigensolver did not converge (dim " + std::to_string(m.rows()) + ")");
  }
  return solver.eigenvalues().reverse();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix from_eigensystem(const RealVector& values, const Matrix& vectors) {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

}  // namespace detail

Eigensystem eigh(const HermitianOperator& op) { return detail::eigh_matrix(op.matrix()); }

DensityOperator::DensityOperator(HermitianOperator op)
    : op_(std::move(op)), eigen_(detail::eigh_matrix(op_.matrix())) {
  const double recon = (eigen_.reconstruct() - op_.matrix()).cwiseAbs().maxCoeff();
  if (!(recon <= kReconstructionTol)) {
    throw Error(ErrorKind::ConvergenceFailure,
                "eigen-reconstruction error " + fmt_double(recon) + " exceeds 1e-9");
  }
  validate_and_clip(kTraceTol);
}

DensityOperator::DensityOperator(HermitianOperator op, Eigensystem eigen, double trace_tol)
    : op_(std::move(op)), eigen_(std::move(eigen)) {
  validate_and_clip(trace_tol);
}

void DensityOperator::validate_and_clip(double trace_tol) {
  const double trace = op_.matrix().trace().real();
  if (!(std::abs(trace - 1.0) <= trace_tol)) {
    throw Error(ErrorKind::InvalidDensity, "trace " + fmt_double(trace) + " differs from 1");
  }
  const double lowest = eigen_.values(eigen_.values.size() - 1);
  if (!(lowest >= -kNegativeEigenvalueTol)) {
    throw Error(ErrorKind::InvalidDensity,
                "negative eigenvalue " + fmt_double(lowest) + " below -1e-12");
  }
  eigen_.values = eigen_.values.cwiseMax(0.0);
}

DensityOperator DensityOperator::from_matrix(Matrix m) {
  return DensityOperator(HermitianOperator(std::move(m)));
}

DensityOperator DensityOperator::diagonal(const std::vector<double>& probabilities) {
  RealVector d = Eigen::Map<const RealVector>(probabilities.data(),
                                              static_cast<Index>(probabilities.size()));
  return DensityOperator(HermitianOperator::diagonal(d));
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
  return DensityOperator(HermitianOperator::diagonal(RealVector::Constant(dim, 1.0 / dim)));
}

DensityOperator density_from_eigensystem(RealVector values, Matrix vectors) {
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  Eigensystem es;
  es.values.resize(values.size());
  es.vectors.resize(vectors.rows(), vectors.cols());
  for (Index i = 0; i < values.size(); ++i) {
    es.values(i) = values(order[i]);
    es.vectors.col(i) = vectors.col(order[i]);
  }
  auto op = HermitianOperator::from_computed(es.reconstruct());
  return DensityOperator(std::move(op), std::move(es));
}

TestOperator::TestOperator(HermitianOperator op, double log_scale)
    : op_(std::move(op)), log_scale_(log_scale) {
  if (!(log_scale_ <= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "test scale must lie in [0, 1]");
  }
  const RealVector ev = detail::eigvalsh_matrix(op_.matrix());
  if (ev(ev.size() - 1) < -kTestSpectrumTol || ev(0) > 1.0 + kTestSpectrumTol) {
    throw Error(ErrorKind::InvalidArgument, "test spectrum [" + fmt_double(ev(ev.size() - 1)) +
                                                ", " + fmt_double(ev(0)) +
                                                "] leaves [0, 1]");
  }
}

double TestOperator::scale() const { return std::exp(log_scale_); }

double TestOperator::log_expectation(const DensityOperator& d) const {
  if (d.dim() != dim()) {
    throw Error(ErrorKind::DimMismatch, "test and state dimensions differ");
  }
  const double value = (d.matrix().cwiseProduct(op_.matrix().transpose())).sum().real();
  if (value <= 0.0) return -std::numeric_limits<double>::infinity();
  return log_scale_ + std::log(value);
}

StatePair::StatePair(DensityOperator rho, DensityOperator eta)
    : rho_(std::move(rho)), eta_(std::move(eta)), order_log_(0.0) {
  if (rho_.dim() != eta_.dim()) {
    throw Error(ErrorKind::DimMismatch, "rho has dim " + std::to_string(rho_.dim()) +
                                            ", eta has dim " + std::to_string(eta_.dim()));
  }
  order_log_ = order_constant(rho_, eta_);
  if (!std::isfinite(order_log_)) {
    throw Error(ErrorKind::EtaSingular, "order constant is not finite");
  }
}

HermitianOperator mat_power(const DensityOperator& d, double s) {
  if (s < 0.0 && d.min_eigenvalue() < kFullRankTol) {
    throw Error(ErrorKind::SingularPower, "negative power " + fmt_double(s) +
                                              " of a density with eigenvalue " +
                                              fmt_double(d.min_eigenvalue()));
  }
  RealVector powered = d.eigenvalues().unaryExpr([s](double x) { return std::pow(x, s); });
  return HermitianOperator::from_computed(detail::from_eigensystem(powered, d.eigenvectors()));
}

bool loewner_leq(const HermitianOperator& a, const HermitianOperator& b, double tol) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimMismatch, "loewner_leq operands differ in dimension");
  }
  const Matrix diff = b.matrix() - a.matrix();
  const RealVector ev = detail::eigvalsh_matrix(0.5 * (diff + diff.adjoint()));
  return ev(ev.size() - 1) >= -tol;
}

double order_constant(const DensityOperator& rho, const DensityOperator& eta) {
  if (rho.dim() != eta.dim()) {
    throw Error(ErrorKind::DimMismatch, "order_constant operands differ in dimension");
  }
  if (eta.min_eigenvalue() < kFullRankTol) {
    throw Error(ErrorKind::EtaSingular,
                "eta smallest eigenvalue " + fmt_double(eta.min_eigenvalue()) + " below 1e-12");
  }
  const Matrix& v = eta.eigenvectors();
  const RealVector inv_sqrt = eta.eigenvalues().cwiseSqrt().cwiseInverse();
  Matrix m = inv_sqrt.cast<Complex>().asDiagonal() * (v.adjoint() * rho.matrix() * v) *
             inv_sqrt.cast<Complex>().asDiagonal();
  const RealVector ev = detail::eigvalsh_matrix(0.5 * (m + m.adjoint()));
  return std::log(ev(0));
}

bool fits_dense_cap(Index dim, int n, std::size_t cap) {
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > cap / static_cast<std::size_t>(dim)) return false;
    total *= static_cast<std::size_t>(dim);
  }
  return total <= cap;
}

DensityOperator tensor_power(const DensityOperator& d, int n, std::size_t cap) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "tensor power requires n >= 1");
  if (!fits_dense_cap(d.dim(), n, cap)) {
    throw Error(ErrorKind::DenseCapExceeded,
                std::to_string(d.dim()) + "^" + std::to_string(n) + " exceeds dense cap " +
                    std::to_string(cap));
  }
  if (n == 1) return d;
  Matrix m = d.matrix();
  Matrix vecs = d.eigenvectors();
  RealVector vals = d.eigenvalues();
  for (int i = 1; i < n; ++i) {
    m = detail::kron(m, d.matrix());
    vecs = detail::kron(vecs, d.eigenvectors());
    RealVector next(vals.size() * d.dim());
    for (Index a = 0; a < vals.size(); ++a) {
      for (Index b = 0; b < d.dim(); ++b) next(a * d.dim() + b) = vals(a) * d.eigenvalues()(b);
    }
    vals = std::move(next);
  }
  std::vector<Index> order(vals.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return vals(a) > vals(b); });
  Eigensystem es;
  es.values.resize(vals.size());
  es.vectors.resize(vecs.rows(), vecs.cols());
  for (Index i = 0; i < vals.size(); ++i) {
    es.values(i) = vals(order[i]);
    es.vectors.col(i) = vecs.col(order[i]);
  }
  return DensityOperator(HermitianOperator::from_computed(m), std::move(es), n * kTraceTol);
}

double commutator_norm(const Matrix& a, const Matrix& b) { return (a * b - b * a).norm(); }

}  // namespace qht
