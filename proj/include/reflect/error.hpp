#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reflect {

enum class ErrorCode {
  InvalidArgument,
  ResonantKernel,
  OutOfDomain,
  OnDiagonal,
  ParameterMismatch,
  InternalInconsistency,
  QuadratureFailure,
  GridMismatch,
  DomainViolation,
  NonFinite,
  NoConvergence,
  SingularJacobian,
  MonotonicityBroken,
  BadWindow,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ResonantKernel: return "ResonantKernel";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OnDiagonal: return "OnDiagonal";
    case ErrorCode::ParameterMismatch: return "ParameterMismatch";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::MonotonicityBroken: return "MonotonicityBroken";
    case ErrorCode::BadWindow: return "BadWindow";
  }
  return "Unknown";
}

// Validation failures are caller mistakes; everything else is a numerical
// failure of an otherwise well-posed request.
constexpr bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutOfDomain:
    case ErrorCode::ParameterMismatch:
    case ErrorCode::GridMismatch:
    case ErrorCode::BadWindow:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reflect
