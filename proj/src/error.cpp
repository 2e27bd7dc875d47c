#include "motiveforge/error.hpp"

namespace mforge {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotCyclotomic: return "NotCyclotomic";
    case ErrorCode::Overlap: return "Overlap";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorCode::DivisibilityFails: return "DivisibilityFails";
    case ErrorCode::RoundingGap: return "RoundingGap";
    case ErrorCode::DenominatorUnresolved: return "DenominatorUnresolved";
    case ErrorCode::NonIntegral: return "NonIntegral";
    case ErrorCode::WeilFail: return "WeilFail";
    case ErrorCode::Ambiguous: return "Ambiguous";
    case ErrorCode::BadPrime: return "BadPrime";
    case ErrorCode::MissingEigenvalue: return "MissingEigenvalue";
    case ErrorCode::NonIntegralCoefficient: return "NonIntegralCoefficient";
    case ErrorCode::RamifiedTwist: return "RamifiedTwist";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::NoConsistentCharacter: return "NoConsistentCharacter";
    case ErrorCode::NoCandidate: return "NoCandidate";
    case ErrorCode::NotOrdinary: return "NotOrdinary";
    case ErrorCode::PrecisionLoss: return "PrecisionLoss";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::NotUpperHalfPlane: return "NotUpperHalfPlane";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::NoRepresentation: return "NoRepresentation";
    case ErrorCode::NotPIntegral: return "NotPIntegral";
    case ErrorCode::MissingFactor: return "MissingFactor";
    case ErrorCode::InsufficientCutoff: return "InsufficientCutoff";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace mforge
