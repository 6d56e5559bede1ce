#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nfold {

enum class ErrorKind {
  SingularJet,
  OrderMismatch,
  OrderTooLow,
  BadParams,
  NonPositiveMass,
  DegenerateBasis,
  SingularTurningPoint,
  InvarianceViolated,
  CaseSingularity,
  LatticePole,
  IllConditionedBasis,
  NotHermitianInput,
  ConfigError,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularJet: return "SingularJet";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::OrderTooLow: return "OrderTooLow";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::NonPositiveMass: return "NonPositiveMass";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::SingularTurningPoint: return "SingularTurningPoint";
    case ErrorKind::InvarianceViolated: return "InvarianceViolated";
    case ErrorKind::CaseSingularity: return "CaseSingularity";
    case ErrorKind::LatticePole: return "LatticePole";
    case ErrorKind::IllConditionedBasis: return "IllConditionedBasis";
    case ErrorKind::NotHermitianInput: return "NotHermitianInput";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it to a machine-readable error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nfold
