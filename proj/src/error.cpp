#include "walkabout/error.hpp"

namespace walkabout {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::KernelInvalid: return "KernelInvalid";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooLargeForExact: return "TooLargeForExact";
    case ErrorCode::DidNotMix: return "DidNotMix";
    case ErrorCode::InvalidSeed: return "InvalidSeed";
    case ErrorCode::NotRevealed: return "NotRevealed";
    case ErrorCode::NotQueried: return "NotQueried";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::NoAcceptedSamples: return "NoAcceptedSamples";
    case ErrorCode::InsufficientCollisions: return "InsufficientCollisions";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::ConnectFailure: return "ConnectFailure";
    case ErrorCode::SessionExpired: return "SessionExpired";
    case ErrorCode::Protocol: return "Protocol";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace walkabout
