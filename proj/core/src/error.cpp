#include "fptmc/error.hpp"

namespace fptmc {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ElementOutOfRange: return "ElementOutOfRange";
    case ErrorCode::EmptyUniverse: return "EmptyUniverse";
    case ErrorCode::NotAGraph: return "NotAGraph";
    case ErrorCode::NotPrenexNNF: return "NotPrenexNNF";
    case ErrorCode::ArityBoundExceeded: return "ArityBoundExceeded";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::NotPrenex: return "NotPrenex";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::VocabularyMismatch: return "VocabularyMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ElementNotCovered: return "ElementNotCovered";
    case ErrorCode::TupleNotCovered: return "TupleNotCovered";
    case ErrorCode::DisconnectedOccurrence: return "DisconnectedOccurrence";
    case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::InfeasibleDeterministic: return "InfeasibleDeterministic";
    case ErrorCode::DNFBlowup: return "DNFBlowup";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::UnsupportedAlternation: return "UnsupportedAlternation";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::InvalidMachine: return "InvalidMachine";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace fptmc
