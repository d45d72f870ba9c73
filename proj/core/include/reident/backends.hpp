// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Candidate-name producers. A Backend turns a rendered prompt into raw
// completions; predict() owns truncation, prompt rendering, retries and
// turning raw text into ranked candidate names.

#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reident/model.hpp"

namespace reident {

enum class Task { kGeneration, kFillMask, kQa };

std::string_view to_string(Task task) noexcept;
Task parse_task(std::string_view s);

struct PromptTemplate {
  std::string id;
  std::string prefix;
  std::string suffix;
  std::string mask_placeholder{kDefaultMaskToken};

  /// prefix + document + suffix, with the placeholder in prefix/suffix
  /// replaced by the document's own mask token.
  std::string render(std::string_view document_text, std::string_view mask_token) const;
};

struct BackendSpec {
  std::string id;
  Task task = Task::kGeneration;
  /// "mock:<name>", "baseline:<kind>" or an http(s) URL.
  std::string endpoint;
  std::string model;
  std::size_t max_input_chars = 1000;
  DecodingSpec decoding;
  std::size_t top_n = 5;
  /// Name of the environment variable holding the bearer token.
  std::string auth_env;
  std::size_t parallelism = 4;

  /// Throws InvalidArgument when top_n or max_input_chars is 0.
  void validate() const;
};

/// First `max_chars` characters of `text`. A cut that would land inside an
/// occurrence of `mask_token` moves back to the start of that occurrence.
std::string truncate_input(std::string_view text, std::size_t max_chars,
                           std::string_view mask_token = kDefaultMaskToken);

/// Keeps the first line, drops quote characters and leading/trailing
/// punctuation, and caps the result at `max_tokens` whitespace tokens.
std::string extract_name(std::string_view response, std::size_t max_tokens = 5);

struct GenerationRequest {
  Task task = Task::kGeneration;
  std::string prompt;
  /// Document text the prompt was built from, after truncation.
  std::string_view visible_text;
  /// Retrieved context passages, when the caller supplies any.
  std::vector<std::string_view> documents;
  std::string mask_token{kDefaultMaskToken};
  DecodingSpec decoding;
  std::size_t candidates = 1;
  /// Run seed; only seeded backends (random baseline) use it.
  std::uint64_t seed = 0;
  /// Only mocks and baselines look at this; remote backends never do.
  const MaskedDocument* document = nullptr;
};

struct GenerationResponse {
  std::vector<std::string> texts;
  std::string raw;
};

class Backend {
 public:
  virtual ~Backend() = default;
  /// Must be safe to call concurrently.
  virtual GenerationResponse generate(const GenerationRequest& request) const = 0;
};

struct RetryPolicy {
  std::size_t attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
};

/// Retries retryable Errors with exponential backoff (RateLimited waits at
/// least its retry-after). The last error is rethrown.
GenerationResponse generate_with_retry(const Backend& backend, const GenerationRequest& request,
                                       const RetryPolicy& policy = {});

struct Prediction {
  PredictionSet set;
  std::string prompt;
  std::string raw_response;
};

/// Truncates doc.masked_text to spec.max_input_chars, renders, queries and
/// parses. Greedy decoding yields at most one candidate.
PredictionSet predict(const Backend& backend, const BackendSpec& spec,
                      const PromptTemplate& prompt, const MaskedDocument& doc,
                      const RetryPolicy& retry = {});

/// Same as predict() but on caller-prepared visible text, returning the
/// prompt and raw response for audit logging.
Prediction predict_traced(const Backend& backend, const BackendSpec& spec,
                          const PromptTemplate& prompt, const MaskedDocument& doc,
                          std::string_view visible_text, const RetryPolicy& retry = {},
                          std::uint64_t seed = 0);

/// Candidate list from raw completions for the given task, at most `limit`.
std::vector<std::string> parse_candidates(Task task, std::span<const std::string> texts,
                                          std::size_t limit);

using Vector = std::vector<float>;

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string id() const = 0;

  /// One vector per input, in order. Throws DimensionMismatch if the
  /// provider's dimension changes between calls.
  std::vector<Vector> embed(std::span<const std::string> texts) const;

 protected:
  virtual std::vector<Vector> embed_batch(std::span<const std::string> texts) const = 0;

 private:
  mutable std::atomic<std::size_t> dimension_{0};
};

}  // namespace reident
