// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/error.hpp"

namespace reident {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kEmptyName: return "EmptyName";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyPredictionSet: return "EmptyPredictionSet";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kOverlappingSpans: return "OverlappingSpans";
    case ErrorCode::kInvalidSpan: return "InvalidSpan";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kSentenceSplitFailure: return "SentenceSplitFailure";
    case ErrorCode::kEndpointUnavailable: return "EndpointUnavailable";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kEmptyIndex: return "EmptyIndex";
    case ErrorCode::kPoolTooSmall: return "PoolTooSmall";
    case ErrorCode::kMaskLostInSummary: return "MaskLostInSummary";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kUnknownBackend: return "UnknownBackend";
    case ErrorCode::kRunAborted: return "RunAborted";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

ErrorCode parse_error_code(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kIo); ++i) {
    auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == name) return code;
  }
  return ErrorCode::kInvalidArgument;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

CorpusError::CorpusError(ErrorCode code, std::size_t line, const std::string& reason)
    : Error(code, "line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.code(), "[" + stage + "] " + cause.message()), stage_(std::move(stage)) {}

}  // namespace reident
