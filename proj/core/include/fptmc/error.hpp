#ifndef FPTMC_ERROR_HPP
#define FPTMC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fptmc {

enum class ErrorCode {
  ArityMismatch,
  ElementOutOfRange,
  EmptyUniverse,
  NotAGraph,
  NotPrenexNNF,
  ArityBoundExceeded,
  SyntaxError,
  UnknownRelation,
  NotPrenex,
  UnboundVariable,
  VocabularyMismatch,
  TooLarge,
  ElementNotCovered,
  TupleNotCovered,
  DisconnectedOccurrence,
  InvalidDecomposition,
  NotPositive,
  KTooLarge,
  InfeasibleDeterministic,
  DNFBlowup,
  TooManyVariables,
  UnsupportedAlternation,
  NotNormalized,
  InvalidMachine,
  InvalidArgument,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Resource guard failures are the only errors the CLI maps to exit code 3.
inline bool is_resource_error(ErrorCode code) {
  return code == ErrorCode::TooLarge || code == ErrorCode::DNFBlowup ||
         code == ErrorCode::TooManyVariables || code == ErrorCode::InfeasibleDeterministic;
}

}  // namespace fptmc

#endif
