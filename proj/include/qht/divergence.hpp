#pragma once

// Quantum Renyi divergences (sandwiched and Petz), Umegaki relative entropy,
// max-relative entropy, the Hoeffding anti-divergence H*_r and generalized
// cutoff rates. All values are in nats.
//
// Normalization: ln Q*_a = ((a - 1) / a) * D*_a, so that
//   Q*_a = || eta^{(1-a)/2a} rho eta^{(1-a)/2a} ||_a      (Schatten a-norm)
//   D*_a = (1 / (a - 1)) ln tr[(eta^{(1-a)/2a} rho eta^{(1-a)/2a})^a]
//   H*_r = sup_{a > 1} ((a - 1) / a) r - ln Q*_a.

#include <span>
#include <string>
#include <vector>

#include "qht/operator_core.hpp"

namespace qht {

inline constexpr double kMaxAlpha = 1e6;
inline constexpr double kMinAlphaExcess = 1e-4;
inline constexpr int kPointsPerDecade = 64;

/// Caches eta's eigenbasis and rho expressed in it, so that repeated
/// evaluations at different alpha cost one small eigenvalue problem each.
class SandwichEvaluator {
 public:
  explicit SandwichEvaluator(const StatePair& pair);

  /// ln Q*_alpha for alpha in (1, 1e6].
  double log_q_star(double alpha) const;

 private:
  RealVector eta_values_;
  Matrix rho_in_eta_basis_;
};

double log_q_star(const StatePair& pair, double alpha);
double q_star(const StatePair& pair, double alpha);
double sandwiched_renyi(const StatePair& pair, double alpha);

/// (1 / (a - 1)) ln tr(rho^a eta^{1-a}) for a in (0, 1) or (1, 2].
double petz_renyi(const StatePair& pair, double alpha);

/// tr rho (ln rho - ln eta).
double umegaki(const StatePair& pair);

/// D*_infinity, identical to the pair's order constant.
double max_relative(const StatePair& pair);

struct DivergenceCurve {
  std::vector<double> alphas;
  std::vector<double> values;
  std::string pair_id;

  /// Largest decrease values[i] - values[i+1] along the curve (<= 0 when monotone).
  double worst_decrease() const;
};

DivergenceCurve sandwiched_curve(const StatePair& pair, std::span<const double> alphas,
                                 std::string pair_id = {});

struct HoeffdingResult {
  double r = 0.0;
  double value = 0.0;
  /// Maximizing alpha. 1 marks the r <= D_1 branch, +infinity the alpha -> inf limit.
  double arg_alpha = 1.0;
  double truncation_bound = 0.0;
  double alpha_max = 0.0;

  bool at_limit() const;
};

/// Maximizes ((a-1)/a) r - ln Q*_a on a grid geometric in (a - 1) over
/// [1e-4, alpha_max - 1] followed by golden-section refinement on the
/// bracketing triple. The grid of ln Q*_a values is computed once at
/// construction and shared across every r solved afterwards.
class HoeffdingSolver {
 public:
  HoeffdingSolver(const StatePair& pair, double alpha_cap,
                  int points_per_decade = kPointsPerDecade);

  /// H*_r with truncation certified to tol; alpha_max = max(64, r / tol),
  /// clipped to the solver's alpha cap.
  HoeffdingResult solve(double r, double tol) const;

  /// Same optimization without the truncation certificate.
  HoeffdingResult evaluate(double r, double alpha_max) const;

  double objective(double alpha, double r) const;
  double umegaki() const { return umegaki_; }
  double max_relative() const { return max_relative_; }
  double alpha_cap() const { return alpha_cap_; }

 private:
  SandwichEvaluator eval_;
  double umegaki_;
  double max_relative_;
  double alpha_cap_;
  int points_per_decade_;
  std::vector<double> grid_;   // log10(alpha - 1)
  std::vector<double> log_q_;  // ln Q* at grid points
};

/// alpha_max = max(64, r / tol), clipped to 1e6.
double hoeffding_alpha_max(double r, double tol);

HoeffdingResult hoeffding_anti_divergence(const StatePair& pair, double r, double tol,
                                          int points_per_decade = kPointsPerDecade);

/// C_kappa = sup_{r > 0} (r - H*_r / kappa), maximized over a geometric r-grid
/// on [tol, 4 (order_log + 1)] with golden-section refinement.
double cutoff_rate(const StatePair& pair, double kappa, double tol);

}  // namespace qht
