#pragma once

// Stable log-domain arithmetic for probabilities.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace qht {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// ln(e^a + e^b).
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// ln(1 - e^x) for x <= 0.
inline double log1mexp(double x) {
  if (x == kNegInf) return 0.0;
  if (x > -0.6931471805599453) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

/// ln(e^a - e^b) for b <= a.
inline double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  return a + log1mexp(b - a);
}

inline double logsumexp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

}  // namespace qht
