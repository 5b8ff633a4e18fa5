#pragma once

#include <stdexcept>
#include <string>

namespace lissajous {

enum class ErrorCode {
  RankDeficient,
  TooManyColumns,
  NotFullDimensional,
  ZeroCoordinate,
  Inconclusive,
  DimensionGuard,
  NotHypersurface,
  RootExtractionFailed,
  InvalidGraph,
  Disconnected,
  TooLarge,
  OutOfDomain,
  InfeasibleSlice,
  NotUnivariate,
  NonIntegerShift,
  DegenerateJacobian,
  InvalidInput,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::TooManyColumns: return "TooManyColumns";
    case ErrorCode::NotFullDimensional: return "NotFullDimensional";
    case ErrorCode::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::DimensionGuard: return "DimensionGuard";
    case ErrorCode::NotHypersurface: return "NotHypersurface";
    case ErrorCode::RootExtractionFailed: return "RootExtractionFailed";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InfeasibleSlice: return "InfeasibleSlice";
    case ErrorCode::NotUnivariate: return "NotUnivariate";
    case ErrorCode::NonIntegerShift: return "NonIntegerShift";
    case ErrorCode::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lissajous
