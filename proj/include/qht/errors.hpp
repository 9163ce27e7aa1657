#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qht {

enum class ErrorKind {
  NonHermitian,
  InvalidDensity,
  ConvergenceFailure,
  SingularPower,
  EtaSingular,
  DenseCapExceeded,
  AlphaOutOfRange,
  TolOutOfRange,
  KappaOutOfRange,
  SingularDensity,
  DimMismatch,
  TypeCapExceeded,
  NotCommuting,
  BisectionFailure,
  PositiveLogFactor,
  BadBlockParams,
  OrderViolation,
  InsufficientData,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// Input and validation failures map to CLI exit code 1, everything else is
// numerical (exit code 2).
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace qht
