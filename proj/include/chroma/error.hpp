#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chroma {

enum class ErrorCode {
  LoopRejected,
  MultiplicityViolation,
  OverlappingSides,
  VertexOutOfRange,
  ColorOutOfPalette,
  StaleChain,
  InternalRepairFailure,
  InfeasiblePalette,
  PreconditionViolated,
  RetriesExhausted,
  NotBipartite,
  NoPerfectMatching,
  CoverNotFound,
  NoNonNeighbor,
  NoAlternatingPath,
  RenameInfeasible,
  ResidualNotRegular,
  FactorizationFailed,
  NotRealizable,
  OverfullInput,
  DegenerateDeficiency,
  NeighborShortage,
  TooLarge,
  NotTotal,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Base of every error raised by the library. Subclasses carry diagnostics
// (violator sets, partial covers, best partitions) where callers need them.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace chroma
