// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/rag.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "reident/error.hpp"
#include "reident/parallel.hpp"
#include "reident/templates.hpp"
#include "reident/text.hpp"

namespace reident::rag {

std::vector<Chunk> chunk_text(std::string_view article_id, std::string_view text_utf8,
                              std::size_t chunk_size) {
  if (chunk_size == 0) throw Error(ErrorCode::kInvalidArgument, "chunk_size must be >= 1");
  auto chars = text::decode(text_utf8);
  std::vector<Chunk> out;
  for (std::size_t start = 0, n = 0; start < chars.size(); start += chunk_size, ++n) {
    std::ostringstream id;
    id << article_id << '#' << std::setw(6) << std::setfill('0') << n;
    out.push_back(Chunk{id.str(), std::string(article_id),
                        text::encode(std::u32string_view(chars).substr(start, chunk_size)),
                        std::nullopt});
  }
  return out;
}

std::vector<Chunk> chunk_text(std::string_view text_utf8, std::size_t chunk_size) {
  return chunk_text("", text_utf8, chunk_size);
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cosine of vectors with dimensions " +
                                                   std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Embedding cache

namespace {

constexpr char kMagic[8] = {'R', 'I', 'D', 'X', 'E', 'M', 'B', '1'};
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  auto bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) out.put(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      throw Error(ErrorCode::kParseError, "embedding cache is truncated");
    }
    bits |= static_cast<U>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return std::bit_cast<T>(bits);
}

}  // namespace

std::uint64_t EmbeddingCache::key(std::string_view chunk_text) { return text::fnv1a64(chunk_text); }

EmbeddingCache EmbeddingCache::load(const std::filesystem::path& path, std::string embedder_id) {
  EmbeddingCache cache(std::move(embedder_id));
  std::ifstream in(path, std::ios::binary);
  if (!in) return cache;
  char magic[8];
  in.read(magic, sizeof magic);
  if (in.gcount() != sizeof magic || !std::equal(magic, magic + 8, kMagic)) {
    throw Error(ErrorCode::kParseError, path.string() + " is not an embedding cache");
  }
  if (get_le<std::uint32_t>(in) != kCacheVersion) {
    throw Error(ErrorCode::kParseError, path.string() + ": unsupported cache version");
  }
  auto dimension = get_le<std::uint32_t>(in);
  auto id_length = get_le<std::uint32_t>(in);
  std::string stored_id(id_length, '\0');
  in.read(stored_id.data(), id_length);
  if (static_cast<std::uint32_t>(in.gcount()) != id_length) {
    throw Error(ErrorCode::kParseError, "embedding cache is truncated");
  }
  if (stored_id != cache.embedder_id_) return cache;
  auto count = get_le<std::uint64_t>(in);
  cache.dimension_ = dimension;
  cache.entries_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto k = get_le<std::uint64_t>(in);
    Vector v(dimension);
    for (auto& x : v) x = get_le<float>(in);
    cache.entries_.emplace_back(k, std::move(v));
  }
  std::sort(cache.entries_.begin(), cache.entries_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return cache;
}

void EmbeddingCache::save(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(kMagic, sizeof kMagic);
    put_le<std::uint32_t>(out, kCacheVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dimension_));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(embedder_id_.size()));
    out.write(embedder_id_.data(), static_cast<std::streamsize>(embedder_id_.size()));
    put_le<std::uint64_t>(out, entries_.size());
    for (const auto& [k, v] : entries_) {
      put_le<std::uint64_t>(out, k);
      for (float x : v) put_le<float>(out, x);
    }
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

const Vector* EmbeddingCache::find(std::string_view chunk_text) const {
  auto k = key(chunk_text);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const auto& e, std::uint64_t key) { return e.first < key; });
  return it != entries_.end() && it->first == k ? &it->second : nullptr;
}

void EmbeddingCache::put(std::string_view chunk_text, Vector vector) {
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch, "cache holds dimension " +
                                                   std::to_string(dimension_) + ", got " +
                                                   std::to_string(vector.size()));
  }
  auto k = key(chunk_text);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const auto& e, std::uint64_t key) { return e.first < key; });
  if (it != entries_.end() && it->first == k) {
    it->second = std::move(vector);
  } else {
    entries_.emplace(it, k, std::move(vector));
  }
}

// ---------------------------------------------------------------------------
// Index

ChunkIndex::ChunkIndex(std::vector<Chunk> chunks) : chunks_(std::move(chunks)) {
  for (const auto& c : chunks_) {
    if (!c.vector) throw Error(ErrorCode::kInvalidArgument, "chunk " + c.id + " is not embedded");
    if (c.vector->empty()) throw Error(ErrorCode::kInvalidArgument, "chunk " + c.id + " has an empty vector");
    if (dimension_ == 0) dimension_ = c.vector->size();
    if (c.vector->size() != dimension_) {
      throw Error(ErrorCode::kDimensionMismatch, "chunk " + c.id + " has dimension " +
                                                     std::to_string(c.vector->size()) +
                                                     ", index has " + std::to_string(dimension_));
    }
  }
}

ChunkIndex ChunkIndex::build(std::vector<Chunk> chunks, const Embedder& embedder,
                             const BuildOptions& options) {
  EmbeddingCache cache(embedder.id());
  if (options.cache_path) cache = EmbeddingCache::load(*options.cache_path, embedder.id());

  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (const auto* hit = cache.find(chunks[i].text)) {
      chunks[i].vector = *hit;
    } else {
      missing.push_back(i);
    }
  }

  std::size_t batch = std::max<std::size_t>(options.batch_size, 1);
  std::size_t batches = (missing.size() + batch - 1) / batch;
  parallel_for(batches, options.jobs, [&](std::size_t b) {
    std::vector<std::string> texts;
    auto begin = b * batch;
    auto end = std::min(missing.size(), begin + batch);
    for (auto i = begin; i < end; ++i) texts.push_back(chunks[missing[i]].text);
    auto vectors = embedder.embed(texts);
    for (auto i = begin; i < end; ++i) chunks[missing[i]].vector = std::move(vectors[i - begin]);
  });

  if (options.cache_path && !missing.empty()) {
    for (auto i : missing) cache.put(chunks[i].text, *chunks[i].vector);
    cache.save(*options.cache_path);
  }
  return ChunkIndex(std::move(chunks));
}

const Chunk* ChunkIndex::find(std::string_view chunk_id) const {
  auto it = std::find_if(chunks_.begin(), chunks_.end(),
                         [&](const Chunk& c) { return c.id == chunk_id; });
  return it == chunks_.end() ? nullptr : &*it;
}

std::vector<RetrievalResult> query(const ChunkIndex& index, std::span<const float> query_vector,
                                   std::size_t k) {
  if (index.empty()) throw Error(ErrorCode::kEmptyIndex, "query against an empty index");
  if (query_vector.size() != index.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "query has dimension " +
                                                   std::to_string(query_vector.size()) +
                                                   ", index has " + std::to_string(index.dimension()));
  }
  const auto& chunks = index.chunks();
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    scored.emplace_back(cosine_similarity(query_vector, *chunks[i].vector), i);
  }
  auto better = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return chunks[a.second].id < chunks[b.second].id;
  };
  auto take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                    better);
  std::vector<RetrievalResult> out;
  out.reserve(take);
  for (std::size_t r = 0; r < take; ++r) {
    out.push_back({chunks[scored[r].second].id, scored[r].first, r + 1});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline

RagConfig RagConfig::defaults() {
  RagConfig c;
  c.summary_prompt = templates::get("rag_summary");
  c.summary_retry_prompt = templates::get("rag_summary_strict");
  c.reidentify_prompt = templates::get("rag_reidentify");
  c.decoding = DecodingSpec(Beam{5}, 1.0);
  c.top_n = 5;
  return c;
}

namespace {

GenerationRequest text_request(std::string prompt, std::string_view visible,
                               const MaskedDocument& doc) {
  GenerationRequest r;
  r.task = Task::kGeneration;
  r.prompt = std::move(prompt);
  r.visible_text = visible;
  r.mask_token = doc.mask_token();
  r.decoding = DecodingSpec(Greedy{}, 1.0);
  r.candidates = 1;
  r.document = &doc;
  return r;
}

bool has_content(const MaskedDocument& doc) {
  auto stripped = doc.masked_text();
  for (auto pos = stripped.find(doc.mask_token()); pos != std::string::npos;
       pos = stripped.find(doc.mask_token())) {
    stripped.erase(pos, doc.mask_token().size());
  }
  return !text::trim(stripped).empty();
}

}  // namespace

std::string summarize_ruling(const MaskedDocument& ruling, const Backend& summarizer,
                             const RagConfig& config) {
  auto visible = truncate_input(ruling.masked_text(), config.max_ruling_chars, ruling.mask_token());
  for (const auto* prompt : {&config.summary_prompt, &config.summary_retry_prompt}) {
    auto request = text_request(prompt->render(visible, ruling.mask_token()), visible, ruling);
    auto response = generate_with_retry(summarizer, request, config.retry);
    if (response.texts.empty()) continue;
    auto summary = truncate_input(text::trim(response.texts.front()), config.max_summary_chars,
                                  ruling.mask_token());
    if (summary.find(ruling.mask_token()) != std::string::npos) return summary;
  }
  throw Error(ErrorCode::kMaskLostInSummary,
              "summary of " + ruling.id() + " dropped every " + ruling.mask_token());
}

std::string compose_prompt(const RagConfig& config, std::string_view summary,
                           const std::vector<std::string_view>& passages,
                           std::string_view mask_token) {
  std::string body = "Documents:\n";
  for (std::size_t i = 0; i < passages.size(); ++i) {
    body += "[" + std::to_string(i + 1) + "] ";
    body += passages[i];
    body += "\n\n";
  }
  body += "Ruling summary:\n";
  body += summary;
  return config.reidentify_prompt.render(body, mask_token);
}

RagOutcome reidentify(const MaskedDocument& ruling, const ChunkIndex& index,
                      const RagBackends& backends, const RagConfig& config) {
  if (!has_content(ruling)) {
    throw Error(ErrorCode::kInvalidArgument, "ruling " + ruling.id() + " has no text");
  }
  auto stage = [](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(name, e);
    }
  };

  auto summary = stage("summarize", [&] { return summarize_ruling(ruling, backends.summarizer, config); });
  auto query_vector = stage("embed", [&] {
    std::vector<std::string> input{summary};
    return backends.embedder.embed(input).front();
  });
  auto retrieved = stage("retrieve", [&] { return query(index, query_vector, config.k); });

  std::vector<std::string_view> passages;
  for (const auto& r : retrieved) passages.push_back(index.find(r.chunk_id)->text);

  return stage("predict", [&] {
    auto request = text_request(compose_prompt(config, summary, passages, ruling.mask_token()),
                                summary, ruling);
    request.documents = passages;
    request.decoding = config.decoding;
    request.candidates = config.decoding.candidates(config.top_n);
    auto response = generate_with_retry(backends.reader, request, config.retry);
    auto names = parse_candidates(Task::kGeneration, response.texts, request.candidates);
    return RagOutcome{PredictionSet(ruling.id(), std::move(names), request.candidates,
                                    backends.reader_id, config.decoding),
                      summary, retrieved, std::move(request.prompt), std::move(response.raw)};
  });
}

}  // namespace reident::rag
