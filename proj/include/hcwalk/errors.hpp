#pragma once

#include <stdexcept>
#include <string>

namespace hcwalk {

enum class ErrorCode {
  InvalidPeriod,
  NonZeroSum,
  InvalidParam,
  RangeError,
  DomainError,
  Overflow,
  TruncationTooCoarse,
  QuadratureNotConverged,
  DegenerateVariance,
  ResourceLimit,
  TailTolTooLoose,
  LTooSmall,
  ZeroAcceptance,
  IoError,
  ConfigError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidPeriod: return "InvalidPeriod";
    case ErrorCode::NonZeroSum: return "NonZeroSum";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::TruncationTooCoarse: return "TruncationTooCoarse";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::TailTolTooLoose: return "TailTolTooLoose";
    case ErrorCode::LTooSmall: return "LTooSmall";
    case ErrorCode::ZeroAcceptance: return "ZeroAcceptance";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hcwalk
