#pragma once

// Pair files: JSON documents holding either two density matrices with
// complex entries written as [re, im], or two probability vectors.
//
//   {"name": "...", "dim": 2, "rho": [[[re, im], ...], ...], "eta": [...]}
//   {"name": "...", "dim": 2, "classical": {"p": [...], "q": [...]}}

#include <optional>
#include <string>
#include <vector>

#include "qht/operator_core.hpp"
#include "qht/types_pinch.hpp"

namespace qht {

struct PairFile {
  std::string name;
  Index dim = 0;
  std::optional<Matrix> rho;
  std::optional<Matrix> eta;
  std::optional<std::vector<double>> p;
  std::optional<std::vector<double>> q;

  bool is_classical() const { return p.has_value(); }
  /// Validates and builds the state pair (diagonal embedding when classical).
  StatePair state_pair() const;
  /// Throws InvalidArgument for matrix pairs.
  ClassicalPair classical_pair() const;
};

/// Parses and validates structure; throws ParseError on malformed documents.
PairFile parse_pair(const std::string& text);
std::string serialize_pair(const PairFile& file);

PairFile read_pair_file(const std::string& path);
void write_pair_file(const PairFile& file, const std::string& path);

std::vector<std::string> builtin_fixture_names();
/// Throws InvalidArgument for unknown names.
PairFile builtin_fixture(const std::string& name);

/// A built-in fixture name or a path to a pair file.
PairFile load_pair(const std::string& name_or_path);

}  // namespace qht
