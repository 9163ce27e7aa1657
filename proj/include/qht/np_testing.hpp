#pragma once

// Optimal (Neyman-Pearson) tests: maximize tr(A T) subject to tr(B T) <= mu,
// 0 <= T <= 1. Dense pairs are solved by bisection on the Lagrange multiplier
// with a dual certificate; classical pairs exactly over type classes.
// Also the test combinators: scaling, block tests and channel checks.

#include <cstddef>
#include <variant>
#include <vector>

#include "qht/operator_core.hpp"
#include "qht/types_pinch.hpp"

namespace qht {

inline constexpr double kBoundaryTol = 1e-11;
inline constexpr double kDualityTol = 1e-9;
inline constexpr double kLlrGroupTol = 1e-12;

/// Likelihood-ratio test over type classes. Types are indexed as returned by
/// classical_types; the first cut_index entries of sorted_type_ids are
/// accepted fully, the next one with probability boundary_weight.
struct ClassicalTest {
  std::vector<std::size_t> sorted_type_ids;
  std::size_t cut_index = 0;
  double boundary_weight = 0.0;
  std::vector<double> type_log_p;  // total p-mass of each type class
  std::vector<double> type_log_q;  // total q-mass of each type class
  bool accepts_all = false;

  /// ln of the accepted q-mass (the type-II error actually spent).
  double log_q_accepted() const;
  /// ln of the accepted p-mass.
  double log_p_accepted() const;
};

struct NPResult {
  double log_budget = 0.0;
  double log_success = 0.0;
  double lambda_star = 0.0;
  double log_lambda_star = 0.0;
  double duality_gap = 0.0;  // |primal - dual|
  double log_type2 = 0.0;    // ln tr(B T) for the returned test
  std::variant<ClassicalTest, TestOperator> test;
};

/// Throws DimMismatch, InvalidArgument (log_mu > 0) or BisectionFailure.
NPResult np_dense(const DensityOperator& a, const DensityOperator& b, double log_mu);

/// Outcomes of the n-fold product grouped by equal likelihood ratio.
struct LikelihoodTypes {
  std::vector<double> group_log_p;  // aggregated single-copy mass per ratio class
  std::vector<double> group_log_q;
  std::vector<TypeClass> types;     // compositions of n over the ratio classes
};

LikelihoodTypes classical_types(const ClassicalPair& pair, int n,
                                std::size_t cap = kDefaultTypeCap);

/// Exact NP test for p^{(x)n} vs q^{(x)n}. Ties in the likelihood ratio are
/// broken by lexicographic type order.
NPResult np_classical(const ClassicalPair& pair, int n, double log_mu,
                      std::size_t cap = kDefaultTypeCap);

/// Multiplies the test by e^{log_factor}; throws PositiveLogFactor if log_factor > 0.
TestOperator scale_test(const TestOperator& t, double log_factor);

/// e^{-r (n - k n0)} T0^{(x)k} (x) 1 on n copies, kept symbolic.
struct BlockTest {
  TestOperator t0;
  int n0 = 1;
  int n = 1;
  int k = 1;
  int pad = 0;  // n - k n0 copies carrying the identity
  double r = 0.0;
  double log_prefactor = 0.0;

  /// log_prefactor + k * log_base, where log_base = ln of the n0-copy functional.
  double log_functional(double log_base) const;
  /// ln of the n-copy functional for the n0-copy state.
  double log_value(const DensityOperator& state_n0) const;
};

/// Throws BadBlockParams unless n >= n0 >= 1 and r >= 0.
BlockTest block_test(const TestOperator& t0, int n0, int n, double r);

/// x -> sum_i p_i U_i x U_i^dagger.
class MixedUnitaryChannel {
 public:
  MixedUnitaryChannel(std::vector<double> weights, std::vector<Matrix> unitaries);

  Index dim() const { return unitaries_.front().rows(); }
  Matrix apply(const Matrix& x) const;

 private:
  std::vector<double> weights_;
  std::vector<Matrix> unitaries_;
};

/// A unital channel applied copy-wise.
using Channel = std::variant<PinchingSpec, MixedUnitaryChannel>;

DensityOperator apply_channel(const Channel& channel, const DensityOperator& d);

struct ReverseDpiResult {
  double success_processed = 0.0;
  double success_original = 0.0;

  bool holds(double tol = 1e-9) const { return success_processed <= success_original + tol; }
};

/// NP success at budget mu for (Phi(rho)^{(x)n}, Phi(eta)^{(x)n}) and for the
/// unprocessed pair.
ReverseDpiResult reverse_dpi_check(const StatePair& pair, const Channel& channel, int n,
                                   double log_mu, std::size_t cap = kDefaultDenseCap);

struct OrderPerturbResult {
  double success_eta = 0.0;        // (rho, eta) at budget e^{ns} mu, clamped to 1
  double success_eta_tilde = 0.0;  // (rho, eta_tilde) at budget mu
  bool holds = false;
};

/// Requires eta <= e^s eta_tilde (OrderViolation otherwise).
OrderPerturbResult order_perturb_check(const DensityOperator& rho, const DensityOperator& eta,
                                       const DensityOperator& eta_tilde, double s, int n,
                                       double log_mu, std::size_t cap = kDefaultDenseCap);

}  // namespace qht
