#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace walkabout {

enum class ErrorCode {
  // graph-core
  SelfLoop,
  DuplicateEdge,
  NotConnected,
  ValueOutOfRange,
  InvalidArgument,
  // chains
  KernelInvalid,
  DimensionMismatch,
  TooLargeForExact,
  DidNotMix,
  // oracle
  InvalidSeed,
  NotRevealed,
  NotQueried,
  BudgetExhausted,
  // estimators
  ConfigInvalid,
  NoAcceptedSamples,
  InsufficientCollisions,
  // lab
  RegimeViolation,
  // crawl-net
  BindFailure,
  ConnectFailure,
  SessionExpired,
  Protocol,
  // io
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace walkabout
