// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reident {

enum class ErrorCode {
  kEmptyName,
  kInvalidArgument,
  kEmptyPredictionSet,
  kEmptyCorpus,
  kOverlappingSpans,
  kInvalidSpan,
  kProviderUnavailable,
  kSentenceSplitFailure,
  kEndpointUnavailable,
  kMalformedResponse,
  kRateLimited,
  kDimensionMismatch,
  kZeroVector,
  kEmptyIndex,
  kPoolTooSmall,
  kMaskLostInSummary,
  kParseError,
  kInvariantViolation,
  kUnknownBackend,
  kRunAborted,
  kIo,
};

std::string_view to_string(ErrorCode code) noexcept;
/// Inverse of to_string; unknown names map to InvalidArgument.
ErrorCode parse_error_code(std::string_view name) noexcept;

/// Base exception for every failure raised by the toolkit. The code is the
/// stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

  /// True for failures worth another attempt against a remote endpoint.
  bool retryable() const noexcept {
    return code_ == ErrorCode::kEndpointUnavailable || code_ == ErrorCode::kRateLimited;
  }

 private:
  ErrorCode code_;
  std::string message_;
};

class RateLimited : public Error {
 public:
  RateLimited(const std::string& message, std::chrono::milliseconds retry_after)
      : Error(ErrorCode::kRateLimited, message), retry_after_(retry_after) {}

  std::chrono::milliseconds retry_after() const noexcept { return retry_after_; }

 private:
  std::chrono::milliseconds retry_after_;
};

/// A corpus-level failure pinned to a 1-based input line.
class CorpusError : public Error {
 public:
  CorpusError(ErrorCode code, std::size_t line, const std::string& reason);

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

/// Failure inside a multi-stage pipeline, attributed to the stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace reident
