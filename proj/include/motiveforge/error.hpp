#pragma once

#include <stdexcept>
#include <string>

namespace mforge {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  // hgm_core
  NotCyclotomic,
  Overlap,
  LengthMismatch,
  ZeroArgument,
  // ffield_char
  NotPrime,
  TooLarge,
  PrecisionTooLow,
  // hgm_trace
  DivisibilityFails,
  RoundingGap,
  DenominatorUnresolved,
  NonIntegral,
  WeilFail,
  Ambiguous,
  BadPrime,
  // hilbert_asai
  MissingEigenvalue,
  NonIntegralCoefficient,
  RamifiedTwist,
  NotDivisible,
  NetworkError,
  NotFound,
  // matcher
  NoConsistentCharacter,
  NoCandidate,
  NotOrdinary,
  PrecisionLoss,
  NotSquare,
  // series_lab
  Divergent,
  NotUpperHalfPlane,
  NonConvergent,
  NoRepresentation,
  NotPIntegral,
  // lfunc_check
  MissingFactor,
  InsufficientCutoff,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mforge
