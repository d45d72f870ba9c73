// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Retrieval-augmented re-identification: news articles are cut into
// fixed-size character chunks and embedded; a ruling is summarized (masks
// kept), the summary is embedded and matched against the chunks by exact
// cosine top-k, and a generation backend reads summary + chunks and names
// the masked person.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reident/backends.hpp"
#include "reident/model.hpp"

namespace reident::rag {

inline constexpr std::size_t kDefaultChunkSize = 1000;
inline constexpr std::size_t kDefaultTopK = 5;

struct Chunk {
  std::string id;
  std::string article_id;
  std::string text;
  std::optional<Vector> vector;
};

/// Consecutive, non-overlapping slices of `chunk_size` characters; the last
/// one may be shorter. Ids are "<article_id>#<6-digit ordinal>" so that
/// lexicographic id order follows article order then position.
std::vector<Chunk> chunk_text(std::string_view article_id, std::string_view text,
                              std::size_t chunk_size = kDefaultChunkSize);
std::vector<Chunk> chunk_text(std::string_view text, std::size_t chunk_size = kDefaultChunkSize);

/// Throws DimensionMismatch or ZeroVector.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

struct RetrievalResult {
  std::string chunk_id;
  double similarity = 0.0;
  std::size_t rank = 0;
};

/// Content-addressed store of chunk embeddings, tied to one embedder id.
/// File layout is documented in docs/index_cache.md.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::string embedder_id) : embedder_id_(std::move(embedder_id)) {}

  /// Loads entries when the file exists and was written for the same
  /// embedder; a missing or foreign file yields an empty cache. Throws
  /// ParseError for a truncated or corrupt file.
  static EmbeddingCache load(const std::filesystem::path& path, std::string embedder_id);
  void save(const std::filesystem::path& path) const;

  static std::uint64_t key(std::string_view chunk_text);

  const Vector* find(std::string_view chunk_text) const;
  void put(std::string_view chunk_text, Vector vector);
  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& embedder_id() const noexcept { return embedder_id_; }

 private:
  std::string embedder_id_;
  std::size_t dimension_ = 0;
  std::vector<std::pair<std::uint64_t, Vector>> entries_;  // sorted by key
};

struct BuildOptions {
  std::size_t jobs = 1;
  std::size_t batch_size = 32;
  std::optional<std::filesystem::path> cache_path;
};

/// An immutable set of embedded chunks.
class ChunkIndex {
 public:
  /// Every chunk must carry a vector of one shared, non-zero dimension.
  /// Throws DimensionMismatch or InvalidArgument.
  explicit ChunkIndex(std::vector<Chunk> chunks);

  /// Embeds all chunks (reusing cached vectors when a cache path is set).
  static ChunkIndex build(std::vector<Chunk> chunks, const Embedder& embedder,
                          const BuildOptions& options = {});

  const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return chunks_.size(); }
  bool empty() const noexcept { return chunks_.empty(); }
  const Chunk* find(std::string_view chunk_id) const;

 private:
  std::vector<Chunk> chunks_;
  std::size_t dimension_ = 0;
};

/// Exact top-k by cosine similarity, ties broken by smaller chunk id.
/// Throws EmptyIndex or DimensionMismatch.
std::vector<RetrievalResult> query(const ChunkIndex& index, std::span<const float> query_vector,
                                   std::size_t k = kDefaultTopK);

struct RagConfig {
  std::size_t k = kDefaultTopK;
  /// Ruling characters given to the summarizer.
  std::size_t max_ruling_chars = 10000;
  /// Upper bound on summary length so it stays embeddable.
  std::size_t max_summary_chars = 8000;
  PromptTemplate summary_prompt;
  PromptTemplate summary_retry_prompt;
  PromptTemplate reidentify_prompt;
  std::size_t top_n = 5;
  DecodingSpec decoding;
  RetryPolicy retry;

  static RagConfig defaults();
};

/// Summary containing at least one mask token. Re-prompts once with an
/// explicit keep-the-mask instruction, then throws MaskLostInSummary.
std::string summarize_ruling(const MaskedDocument& ruling, const Backend& summarizer,
                             const RagConfig& config = RagConfig::defaults());

struct RagOutcome {
  PredictionSet predictions;
  std::string summary;
  std::vector<RetrievalResult> retrieved;
  std::string prompt;
  std::string raw_response;
};

struct RagBackends {
  const Backend& summarizer;
  const Backend& reader;
  const Embedder& embedder;
  std::string reader_id = "rag";
};

/// summarize -> embed summary -> top-k -> compose prompt -> predict. Stage
/// failures surface as StageError naming "summarize", "embed", "retrieve"
/// or "predict".
RagOutcome reidentify(const MaskedDocument& ruling, const ChunkIndex& index,
                      const RagBackends& backends, const RagConfig& config = RagConfig::defaults());

/// The reader prompt for a summary and the retrieved chunk texts.
std::string compose_prompt(const RagConfig& config, std::string_view summary,
                           const std::vector<std::string_view>& passages,
                           std::string_view mask_token);

}  // namespace reident::rag
