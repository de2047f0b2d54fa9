#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgraph {

enum class ErrorCode {
  kNotPositive,
  kNotNormalized,
  kBadShape,
  kContextMismatch,
  kNotClassicalContext,
  kNotZeroOne,
  kNotProjection,
  kNotBimodule,
  kAxiomsFail,
  kInconsistentVerdict,
  kEquivalenceViolation,
  kNotUnital,
  kRangeViolation,
  kNotTraceRestriction,
  kNotStochastic,
  kNotStatePreserving,
  kVerdictMismatch,
  kTooLarge,
  kBadQ,
  kSpaceMismatch,
  kParse,
};

inline std::string_view error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::kNotPositive: return "NotPositive";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kBadShape: return "BadShape";
    case ErrorCode::kContextMismatch: return "ContextMismatch";
    case ErrorCode::kNotClassicalContext: return "NotClassicalContext";
    case ErrorCode::kNotZeroOne: return "NotZeroOne";
    case ErrorCode::kNotProjection: return "NotProjection";
    case ErrorCode::kNotBimodule: return "NotBimodule";
    case ErrorCode::kAxiomsFail: return "AxiomsFail";
    case ErrorCode::kInconsistentVerdict: return "InconsistentVerdict";
    case ErrorCode::kEquivalenceViolation: return "EquivalenceViolation";
    case ErrorCode::kNotUnital: return "NotUnital";
    case ErrorCode::kRangeViolation: return "RangeViolation";
    case ErrorCode::kNotTraceRestriction: return "NotTraceRestriction";
    case ErrorCode::kNotStochastic: return "NotStochastic";
    case ErrorCode::kNotStatePreserving: return "NotStatePreserving";
    case ErrorCode::kVerdictMismatch: return "VerdictMismatch";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kBadQ: return "BadQ";
    case ErrorCode::kSpaceMismatch: return "SpaceMismatch";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace qgraph
