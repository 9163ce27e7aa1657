#include "qht/errors.hpp"

namespace qht {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::InvalidDensity: return "InvalidDensity";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SingularPower: return "SingularPower";
    case ErrorKind::EtaSingular: return "EtaSingular";
    case ErrorKind::DenseCapExceeded: return "DenseCapExceeded";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::TolOutOfRange: return "TolOutOfRange";
    case ErrorKind::KappaOutOfRange: return "KappaOutOfRange";
    case ErrorKind::SingularDensity: return "SingularDensity";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::TypeCapExceeded: return "TypeCapExceeded";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::BisectionFailure: return "BisectionFailure";
    case ErrorKind::PositiveLogFactor: return "PositiveLogFactor";
    case ErrorKind::BadBlockParams: return "BadBlockParams";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian:
    case ErrorKind::InvalidDensity:
    case ErrorKind::EtaSingular:
    case ErrorKind::AlphaOutOfRange:
    case ErrorKind::TolOutOfRange:
    case ErrorKind::KappaOutOfRange:
    case ErrorKind::DimMismatch:
    case ErrorKind::PositiveLogFactor:
    case ErrorKind::BadBlockParams:
    case ErrorKind::OrderViolation:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
      return true;
    default:
      return false;
  }
}

}  // namespace qht
