//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gnc {

enum class ErrorCode {
  // molgraph
  kUnclosedRing,
  kUnbalancedParenthesis,
  kUnknownElement,
  kValenceViolation,
  kSyntax,
  kNoSubstitutablePosition,
  kMalformedRecord,
  // embedding
  kDimensionMismatch,
  kBothZero,
  kEmptyIndex,
  kIndexVersionMismatch,
  // generator
  kWeightSumViolation,
  kStepTooLarge,
  kInvalidSchedule,
  // toplap
  kEmptySelection,
  kOrderUnsupported,
  kNonSymmetric,
  // predict
  kNonPositiveValue,
  kDegenerateFeatures,
  kNonFiniteLoss,
  kFingerprintMismatch,
  kTooFewRows,
  kNotFitted,
  kSchemaMismatch,
  // screen
  kMissingTarget,
  kMissingProperty,
  kTimeout,
  kMalformedResponse,
  kPartialBatch,
  // cli / io
  kIo,
  kInvalidConfig,
  kPrerequisiteMissing,
};

inline constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::kUnclosedRing: return "UnclosedRing";
  case ErrorCode::kUnbalancedParenthesis: return "UnbalancedParenthesis";
  case ErrorCode::kUnknownElement: return "UnknownElement";
  case ErrorCode::kValenceViolation: return "ValenceViolation";
  case ErrorCode::kSyntax: return "SyntaxError";
  case ErrorCode::kNoSubstitutablePosition: return "NoSubstitutablePosition";
  case ErrorCode::kMalformedRecord: return "MalformedRecord";
  case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
  case ErrorCode::kBothZero: return "BothZero";
  case ErrorCode::kEmptyIndex: return "EmptyIndex";
  case ErrorCode::kIndexVersionMismatch: return "IndexVersionMismatch";
  case ErrorCode::kWeightSumViolation: return "WeightSumViolation";
  case ErrorCode::kStepTooLarge: return "StepTooLarge";
  case ErrorCode::kInvalidSchedule: return "InvalidSchedule";
  case ErrorCode::kEmptySelection: return "EmptySelection";
  case ErrorCode::kOrderUnsupported: return "OrderUnsupported";
  case ErrorCode::kNonSymmetric: return "NonSymmetric";
  case ErrorCode::kNonPositiveValue: return "NonPositiveValue";
  case ErrorCode::kDegenerateFeatures: return "DegenerateFeatures";
  case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
  case ErrorCode::kFingerprintMismatch: return "FingerprintMismatch";
  case ErrorCode::kTooFewRows: return "TooFewRows";
  case ErrorCode::kNotFitted: return "NotFitted";
  case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
  case ErrorCode::kMissingTarget: return "MissingTarget";
  case ErrorCode::kMissingProperty: return "MissingProperty";
  case ErrorCode::kTimeout: return "Timeout";
  case ErrorCode::kMalformedResponse: return "MalformedResponse";
  case ErrorCode::kPartialBatch: return "PartialBatch";
  case ErrorCode::kIo: return "IoError";
  case ErrorCode::kInvalidConfig: return "InvalidConfig";
  case ErrorCode::kPrerequisiteMissing: return "PrerequisiteMissing";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code. `position` is a byte offset
/// for parse errors or a 1-based line number for record errors; npos if
/// neither applies.
class Error: public std::runtime_error {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorCode code, const std::string &message,
        std::size_t position = npos)
      : std::runtime_error(format(code, message, position)), code_(code),
        position_(position) { }

  ErrorCode code() const noexcept { return code_; }
  std::size_t position() const noexcept { return position_; }

private:
  static std::string format(ErrorCode code, const std::string &message,
                            std::size_t position) {
    std::string out(error_name(code));
    if (position != npos) {
      out += " at ";
      out += std::to_string(position);
    }
    out += ": ";
    out += message;
    return out;
  }

  ErrorCode code_;
  std::size_t position_;
};

}  // namespace gnc
