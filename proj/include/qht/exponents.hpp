#pragma once

// Finite-n strong-converse exponents b_n(r) = -(1/n) ln(max success at
// type-II budget e^{-nr}) and their convergence to the Hoeffding
// anti-divergence H*_r.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qht/operator_core.hpp"
#include "qht/types_pinch.hpp"

namespace qht {

enum class Engine { Auto, Dense, Classical, Pinched };

std::string to_string(Engine e);
/// Parses "auto", "dense", "classical" or "pinched"; throws InvalidArgument.
Engine parse_engine(const std::string& s);

struct ExponentRecord {
  int n = 1;
  double r = 0.0;
  double log_success = 0.0;
  double b_n = 0.0;
  Engine engine = Engine::Dense;
};

/// Commuting pairs go to the classical engine, others to dense while
/// d^n <= cap, then to pinched while d^n <= cap; beyond that DenseCapExceeded.
Engine resolve_engine(const StatePair& pair, int n, Engine requested,
                      std::size_t cap = kDefaultDenseCap);

ExponentRecord finite_n_exponent(const StatePair& pair, int n, double r,
                                 Engine engine = Engine::Auto,
                                 std::size_t cap = kDefaultDenseCap);
ExponentRecord finite_n_exponent(const ClassicalPair& pair, int n, double r);

struct ConvergenceReport {
  std::vector<ExponentRecord> records;
  double h_star = 0.0;
  double fitted_envelope_C = 0.0;
  double final_gap = 0.0;

  /// |b_n - h_star| per record.
  std::vector<double> gaps() const;
};

inline constexpr double kSweepHoeffdingTol = 1e-8;

/// Schedule must be strictly ascending and positive.
ConvergenceReport convergence_sweep(const StatePair& pair, double r,
                                    std::span<const int> n_schedule,
                                    Engine engine = Engine::Auto,
                                    std::size_t cap = kDefaultDenseCap);
ConvergenceReport convergence_sweep(const ClassicalPair& pair, double r,
                                    std::span<const int> n_schedule);

struct BrEstimate {
  double estimate = 0.0;
  double uncertainty = 0.0;

  bool contains(double value, double slack = 0.0) const;
};

/// estimate = b_{n_max}, uncertainty = C ln(n_max + 1) / n_max.
/// Throws InsufficientData with fewer than 3 records.
BrEstimate b_r_estimate(const ConvergenceReport& report);

}  // namespace qht
