#pragma once

// Property suites run by `qht check`. Each assertion reports the worst value
// observed against its tolerance; everything is deterministic given the seed.

#include <cstdint>
#include <string>
#include <vector>

namespace qht {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// dpi, binning, pinching, np_duality, exponents, cutoff.
std::vector<std::string> check_suite_names();

/// Runs one suite, or every suite for "all". Throws InvalidArgument for unknown names.
std::vector<CheckResult> run_check_suite(const std::string& suite, std::uint64_t seed);

}  // namespace qht
