#pragma once

// Dense Hermitian linear algebra and the validated operator types used by
// every other module: Hermitian operators, density operators, tests and
// state pairs. All types are immutable after construction.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qht/errors.hpp"

namespace qht {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kNegativeEigenvalueTol = 1e-12;
inline constexpr double kReconstructionTol = 1e-9;
inline constexpr double kFullRankTol = 1e-12;
inline constexpr double kTestSpectrumTol = 1e-10;
inline constexpr std::size_t kDefaultDenseCap = 4096;

/// Spectral decomposition with eigenvalues sorted in descending order and the
/// matching eigenvectors stored as columns.
struct Eigensystem {
  RealVector values;
  Matrix vectors;

  Matrix reconstruct() const;
};

class HermitianOperator {
 public:
  /// Rejects (never repairs) matrices whose entries violate
  /// |m(i,j) - conj(m(j,i))| <= 1e-10.
  explicit HermitianOperator(Matrix m);

  /// For matrices produced internally by arithmetic on Hermitian inputs:
  /// averages with the adjoint to remove rounding asymmetry.
  static HermitianOperator from_computed(const Matrix& m);
  static HermitianOperator identity(Index dim);
  static HermitianOperator diagonal(const RealVector& diag);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  struct Trusted {};
  HermitianOperator(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

/// Eigendecomposition of a Hermitian operator. Throws ConvergenceFailure if
/// the tridiagonal QR iteration does not converge (Eigen caps it at 30 sweeps
/// per eigenvalue).
Eigensystem eigh(const HermitianOperator& op);

namespace detail {
Eigensystem eigh_matrix(const Matrix& m);
RealVector eigvalsh_matrix(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix from_eigensystem(const RealVector& values, const Matrix& vectors);
}  // namespace detail

/// Unit-trace positive semidefinite operator with a cached eigensystem.
/// Eigenvalues in [-1e-12, 0) are clipped to zero after validation.
class DensityOperator {
 public:
  explicit DensityOperator(HermitianOperator op);

  static DensityOperator from_matrix(Matrix m);
  static DensityOperator diagonal(const std::vector<double>& probabilities);
  static DensityOperator maximally_mixed(Index dim);

  Index dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const RealVector& eigenvalues() const { return eigen_.values; }
  const Matrix& eigenvectors() const { return eigen_.vectors; }
  double min_eigenvalue() const { return eigen_.values(eigen_.values.size() - 1); }
  double max_eigenvalue() const { return eigen_.values(0); }

 private:
  // Builds from an eigensystem known by construction (tensor powers), skipping
  // the O(d^3) reconstruction check. Trace and sign are still validated.
  DensityOperator(HermitianOperator op, Eigensystem eigen, double trace_tol = kTraceTol);
  void validate_and_clip(double trace_tol);

  friend DensityOperator tensor_power(const DensityOperator&, int, std::size_t);
  friend DensityOperator density_from_eigensystem(RealVector, Matrix);

  HermitianOperator op_;
  Eigensystem eigen_;
};

/// Density V diag(values) V^dagger from a trusted eigensystem (values sorted
/// descending by the callee).
DensityOperator density_from_eigensystem(RealVector values, Matrix vectors);

/// A test 0 <= T <= 1 carried as an operator times a scale e^{log_scale}.
/// Keeping the scale in log form lets e^{-n eps} factors survive large n.
class TestOperator {
 public:
  explicit TestOperator(HermitianOperator op, double log_scale = 0.0);

  const HermitianOperator& op() const { return op_; }
  double log_scale() const { return log_scale_; }
  double scale() const;
  Index dim() const { return op_.dim(); }

  /// ln tr(d * scale * op).
  double log_expectation(const DensityOperator& d) const;

 private:
  HermitianOperator op_;
  double log_scale_;
};

/// A pair (rho, eta) with eta of full rank. order_log = ln min{l : rho <= l eta}
/// is the max-relative entropy and is always finite here.
class StatePair {
 public:
  StatePair(DensityOperator rho, DensityOperator eta);

  const DensityOperator& rho() const { return rho_; }
  const DensityOperator& eta() const { return eta_; }
  double order_log() const { return order_log_; }
  Index dim() const { return rho_.dim(); }

 private:
  DensityOperator rho_;
  DensityOperator eta_;
  double order_log_;
};

/// V diag(lambda^s) V^dagger. Negative powers require full rank.
HermitianOperator mat_power(const DensityOperator& d, double s);

/// True iff the smallest eigenvalue of b - a is >= -tol.
bool loewner_leq(const HermitianOperator& a, const HermitianOperator& b, double tol);

/// ln lambda_max(eta^{-1/2} rho eta^{-1/2}).
double order_constant(const DensityOperator& rho, const DensityOperator& eta);

/// n-fold Kronecker power. Throws DenseCapExceeded when dim^n > cap.
DensityOperator tensor_power(const DensityOperator& d, int n,
                             std::size_t cap = kDefaultDenseCap);

/// Frobenius norm of ab - ba.
double commutator_norm(const Matrix& a, const Matrix& b);

/// Checks dim^n <= cap without overflowing.
bool fits_dense_cap(Index dim, int n, std::size_t cap);

}  // namespace qht
