// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic in-process backends and embedders. They stand in for remote
// models in tests, smoke runs and the acceptance suite.

#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "reident/backends.hpp"

namespace reident::mocks {

/// Answers with the hidden target's full name (empty when unlabeled).
class OracleBackend final : public Backend {
 public:
  GenerationResponse generate(const GenerationRequest& request) const override;
};

/// Always answers with the same ranked list.
class ListBackend final : public Backend {
 public:
  explicit ListBackend(std::vector<std::string> answers) : answers_(std::move(answers)) {}
  GenerationResponse generate(const GenerationRequest& request) const override;

 private:
  std::vector<std::string> answers_;
};

/// Returns `depth` filler names with the target placed at a rank derived
/// from the document id, so widening top_n can only add hits.
class RankedOracleBackend final : public Backend {
 public:
  explicit RankedOracleBackend(std::size_t depth = 5) : depth_(depth) {}
  GenerationResponse generate(const GenerationRequest& request) const override;

  static std::size_t target_rank(std::string_view document_id, std::size_t depth);

 private:
  std::size_t depth_;
};

/// Names the target only when `marker` is inside the visible text; accuracy
/// is therefore a step function of how many characters the model sees.
class ClueBackend final : public Backend {
 public:
  explicit ClueBackend(std::string marker = "[clue]", std::string fallback = "Nobody Known")
      : marker_(std::move(marker)), fallback_(std::move(fallback)) {}
  GenerationResponse generate(const GenerationRequest& request) const override;

 private:
  std::string marker_;
  std::string fallback_;
};

/// Summarizer stand-in: the first `count` sentences of the visible text.
class LeadSentencesBackend final : public Backend {
 public:
  explicit LeadSentencesBackend(std::size_t count = 2) : count_(count) {}
  GenerationResponse generate(const GenerationRequest& request) const override;

 private:
  std::size_t count_;
};

/// A context-only reader for retrieval runs. It never uses the hidden
/// target. Starting from the linking keys of the visible text (initials such
/// as "A. B." and words of six or more letters) it repeatedly pulls in every
/// context passage that shares a key, and answers with the "First Last"
/// names found in the passages it reached, in reach order. A name is a
/// capitalized word from `first_names` followed by another capitalized word.
class ContextLinkerBackend final : public Backend {
 public:
  explicit ContextLinkerBackend(std::set<std::string> first_names)
      : first_names_(std::move(first_names)) {}
  GenerationResponse generate(const GenerationRequest& request) const override;

  static std::set<std::string> linking_keys(std::string_view passage);
  std::vector<std::string> person_names(std::string_view passage) const;

 private:
  std::set<std::string> first_names_;
};

/// Bag-of-words embedder: each lowercase alphanumeric token adds 1 to
/// bucket fnv1a(token) % dimension. Token-free text maps to bucket 0 so no
/// vector is ever all-zero.
class HashingEmbedder final : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dimension = 256) : dimension_(dimension) {}
  std::string id() const override { return "mock:hash:" + std::to_string(dimension_); }

  static std::vector<std::string> tokens(std::string_view text);

 protected:
  std::vector<Vector> embed_batch(std::span<const std::string> texts) const override;

 private:
  std::size_t dimension_;
};

}  // namespace reident::mocks
