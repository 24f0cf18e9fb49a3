#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spdc {

enum class ErrorKind {
  OutOfRange,
  UnknownModel,
  NoSolution,
  Unsupported,
  InvalidArgument,
  GridTooCoarse,
  GridTooSmall,
  OffGrid,
  OutOfGrid,
  NonParaxial,
  QuadratureNotConverged,
  DegenerateInput,
  DegenerateDistribution,
  FitDiverged,
  GridMismatch,
  SchemaError,
  BandwidthExceeded,
  ConfigError,
  IoError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::OffGrid: return "OffGrid";
    case ErrorKind::OutOfGrid: return "OutOfGrid";
    case ErrorKind::NonParaxial: return "NonParaxial";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorKind::FitDiverged: return "FitDiverged";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::BandwidthExceeded: return "BandwidthExceeded";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Numerical failures as opposed to bad input or configuration.
  bool numerical() const noexcept {
    switch (kind_) {
      case ErrorKind::NoSolution:
      case ErrorKind::QuadratureNotConverged:
      case ErrorKind::DegenerateDistribution:
      case ErrorKind::FitDiverged:
      case ErrorKind::OutOfGrid:
      case ErrorKind::NonParaxial:
      case ErrorKind::BandwidthExceeded:
      case ErrorKind::GridMismatch:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace spdc
