#pragma once

// Pinching maps F(x) = sum_j e_j x e_j, cp-order index checks, type-class
// enumeration for tensor powers, and the bridge from commuting pairs to
// classical distributions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qht/operator_core.hpp"

namespace qht {

inline constexpr std::size_t kDefaultTypeCap = 10'000'000;
inline constexpr double kProjectorTol = 1e-9;
inline constexpr double kEigenvalueGroupTol = 1e-9;
inline constexpr double kCommuteTol = 1e-9;

/// Orthogonal projections summing to the identity, stored as an orthonormal
/// basis with a block label per basis vector. Pinching is then three matrix
/// products regardless of K.
class PinchingSpec {
 public:
  /// Validates idempotence, mutual orthogonality and completeness (1e-9).
  explicit PinchingSpec(std::vector<HermitianOperator> projectors);

  /// Projector j is the span of the columns of `unitary` labelled j.
  static PinchingSpec from_basis(Matrix unitary, std::vector<int> labels);
  /// Rank-one projectors onto the computational basis (full dephasing).
  static PinchingSpec computational(Index dim);
  /// The single projector 1.
  static PinchingSpec trivial(Index dim);

  std::size_t size() const { return count_; }
  Index dim() const { return basis_.rows(); }
  /// Materializes the projectors (O(K d^2) memory).
  std::vector<HermitianOperator> projectors() const;
  const Matrix& basis() const { return basis_; }
  const std::vector<int>& labels() const { return labels_; }

  Matrix apply(const Matrix& x) const;

 private:
  PinchingSpec(Matrix basis, std::vector<int> labels);

  Matrix basis_;
  std::vector<int> labels_;
  std::size_t count_ = 0;
};

HermitianOperator pinch(const HermitianOperator& x, const PinchingSpec& spec);
DensityOperator pinch(const DensityOperator& x, const PinchingSpec& spec);

/// -lambda_min(K F(x) - x), floored at zero.
double cp_violation(const PinchingSpec& spec, const HermitianOperator& x);

/// Largest cp_violation over `samples` seeded random unit-trace PSD matrices.
double cp_index_check(const PinchingSpec& spec, int samples, std::uint64_t seed);

struct TypeClass {
  std::vector<int> counts;
  double log_multiplicity = 0.0;
  double log_eta_eigenvalue = 0.0;

  int n() const;
};

/// C(n + K - 1, K - 1) as a floating-point value (saturates instead of overflowing).
double composition_count(int K, int n);

/// All compositions of n into K nonnegative parts in lexicographic order.
/// Throws TypeCapExceeded when their number exceeds cap.
std::vector<TypeClass> enumerate_types(int K, int n, std::size_t cap = kDefaultTypeCap);

/// Sets log_eta_eigenvalue = sum_i j_i log_weights[i] on every type.
void weight_types(std::vector<TypeClass>& types, std::span<const double> log_weights);

/// Two distributions on a common finite alphabet, kept as logs. q has full support.
class ClassicalPair {
 public:
  static ClassicalPair from_probabilities(std::span<const double> p, std::span<const double> q);
  static ClassicalPair from_logs(std::vector<double> log_p, std::vector<double> log_q);

  std::size_t n_outcomes() const { return log_p_.size(); }
  const std::vector<double>& log_p() const { return log_p_; }
  const std::vector<double>& log_q() const { return log_q_; }
  std::vector<double> p() const;
  std::vector<double> q() const;

  /// Diagonal embedding as a quantum state pair.
  StatePair to_state_pair() const;

 private:
  ClassicalPair(std::vector<double> log_p, std::vector<double> log_q);

  std::vector<double> log_p_;
  std::vector<double> log_q_;
};

struct PinchedPair {
  StatePair pair;     // (F_n(rho^{(x)n}), eta^{(x)n})
  PinchingSpec spec;  // projectors onto the eigenspaces of eta^{(x)n}
};

/// Pinches rho^{(x)n} onto the commutant of eta^{(x)n}.
PinchedPair pinched_pair_dense(const StatePair& pair, int n, std::size_t cap = kDefaultDenseCap);

/// The classical pair obtained by diagonalizing F_n(rho^{(x)n}) within each
/// eigenspace of eta^{(x)n}. Never materializes the full d^n x d^n operators.
ClassicalPair pinched_classical(const StatePair& pair, int n, std::size_t cap = kDefaultDenseCap);

/// Simultaneous eigenbasis of two commuting densities; throws NotCommuting when
/// the commutator norm exceeds 1e-9.
ClassicalPair classical_from_commuting(const DensityOperator& rho, const DensityOperator& eta);

/// Number of distinct eigenvalues of eta^{(x)n} (grouped at 1e-9 relative).
std::size_t distinct_tensor_eigenvalues(const DensityOperator& eta, int n);

}  // namespace qht
