#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyxt {

enum class ErrorCode {
  SequenceTooShort,
  NotProper,
  DegenerateAngle,
  Indeterminate,
  CapExceeded,
  ProfileTooAggressive,
  NotFound,
  HypothesesNotCertified,
  EmptyInput,
  DimensionMismatch,
  SubVerificationFailed,
  NegativeCoefficient,
  NegativeReducedEntry,
  DivisorZero,
  ConeMembershipFailed,
  DecompositionFailed,
  ChunkNotCertifiable,
  RankNotThree,
  EmptySlice,
  DegenerateSlice,
  PointOutsidePolygon,
  InvalidArgument,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::SequenceTooShort: return "SequenceTooShort";
  case ErrorCode::NotProper: return "NotProper";
  case ErrorCode::DegenerateAngle: return "DegenerateAngle";
  case ErrorCode::Indeterminate: return "Indeterminate";
  case ErrorCode::CapExceeded: return "CapExceeded";
  case ErrorCode::ProfileTooAggressive: return "ProfileTooAggressive";
  case ErrorCode::NotFound: return "NotFound";
  case ErrorCode::HypothesesNotCertified: return "HypothesesNotCertified";
  case ErrorCode::EmptyInput: return "EmptyInput";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::SubVerificationFailed: return "SubVerificationFailed";
  case ErrorCode::NegativeCoefficient: return "NegativeCoefficient";
  case ErrorCode::NegativeReducedEntry: return "NegativeReducedEntry";
  case ErrorCode::DivisorZero: return "DivisorZero";
  case ErrorCode::ConeMembershipFailed: return "ConeMembershipFailed";
  case ErrorCode::DecompositionFailed: return "DecompositionFailed";
  case ErrorCode::ChunkNotCertifiable: return "ChunkNotCertifiable";
  case ErrorCode::RankNotThree: return "RankNotThree";
  case ErrorCode::EmptySlice: return "EmptySlice";
  case ErrorCode::DegenerateSlice: return "DegenerateSlice";
  case ErrorCode::PointOutsidePolygon: return "PointOutsidePolygon";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// All library failures are reported as `polyxt::Error`; `code()` tells the
/// caller which contract was violated.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) {
  throw Error(code, what);
}

} // namespace polyxt
