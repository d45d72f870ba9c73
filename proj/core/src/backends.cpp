// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/backends.hpp"

#include <algorithm>
#include <thread>

#include "reident/error.hpp"
#include "reident/text.hpp"

namespace reident {

std::string_view to_string(Task task) noexcept {
  switch (task) {
    case Task::kGeneration: return "generation";
    case Task::kFillMask: return "fill_mask";
    case Task::kQa: return "qa";
  }
  return "generation";
}

Task parse_task(std::string_view s) {
  if (s == "generation") return Task::kGeneration;
  if (s == "fill_mask") return Task::kFillMask;
  if (s == "qa") return Task::kQa;
  throw Error(ErrorCode::kInvalidArgument, "unknown task '" + std::string(s) + "'");
}

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  if (from.empty() || from == to) return;
  std::size_t pos = s.find(from);
  while (pos != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos = s.find(from, pos + to.size());
  }
}

}  // namespace

std::string PromptTemplate::render(std::string_view document_text,
                                   std::string_view mask_token) const {
  auto pre = prefix;
  auto post = suffix;
  replace_all(pre, mask_placeholder, mask_token);
  replace_all(post, mask_placeholder, mask_token);
  std::string out;
  out.reserve(pre.size() + document_text.size() + post.size());
  out += pre;
  out += document_text;
  out += post;
  return out;
}

void BackendSpec::validate() const {
  if (top_n < 1) throw Error(ErrorCode::kInvalidArgument, "backend " + id + ": top_n must be >= 1");
  if (max_input_chars < 1) {
    throw Error(ErrorCode::kInvalidArgument, "backend " + id + ": max_input_chars must be >= 1");
  }
}

std::string truncate_input(std::string_view text_utf8, std::size_t max_chars,
                           std::string_view mask_token) {
  auto chars = text::decode(text_utf8);
  if (chars.size() <= max_chars) return std::string(text_utf8);
  auto token = text::decode(mask_token);
  std::size_t cut = max_chars;
  for (std::size_t start : text::find_all(chars, token)) {
    if (start >= cut) break;
    if (cut < start + token.size()) {
      cut = start;
      break;
    }
  }
  return std::string(text_utf8.substr(0, text::byte_offset(text_utf8, cut)));
}

namespace {

bool is_quote(char32_t c) {
  switch (c) {
    case '"': case '`': case 0x201C: case 0x201D: case 0x201E: case 0xAB: case 0xBB:
      return true;
    default:
      return false;
  }
}

bool is_edge_punct(char32_t c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case '\'': case '*':
    case '-': case '(': case ')': case '[': case ']': case '{': case '}':
    case 0x2013: case 0x2014: case 0x2018: case 0x2019:
      return true;
    default:
      return text::is_space(c) || is_quote(c);
  }
}

}  // namespace

std::string extract_name(std::string_view response, std::size_t max_tokens) {
  auto line = response.substr(0, response.find('\n'));
  std::u32string chars;
  for (char32_t c : text::decode(line)) {
    if (!is_quote(c) && c != '\r') chars.push_back(c);
  }
  std::size_t begin = 0;
  std::size_t end = chars.size();
  while (begin < end && is_edge_punct(chars[begin])) ++begin;
  while (end > begin && is_edge_punct(chars[end - 1])) --end;
  auto tokens = text::split_whitespace(text::encode(std::u32string_view(chars).substr(begin, end - begin)));
  if (tokens.size() > max_tokens) tokens.resize(max_tokens);
  return text::join(tokens, " ");
}

std::vector<std::string> parse_candidates(Task task, std::span<const std::string> texts,
                                          std::size_t limit) {
  std::vector<std::string> out;
  for (const auto& t : texts) {
    if (out.size() >= limit) break;
    out.push_back(task == Task::kFillMask ? std::string(text::trim(t)) : extract_name(t));
  }
  return out;
}

GenerationResponse generate_with_retry(const Backend& backend, const GenerationRequest& request,
                                       const RetryPolicy& policy) {
  auto backoff = policy.initial_backoff;
  std::size_t attempts = std::max<std::size_t>(policy.attempts, 1);
  for (std::size_t attempt = 1;; ++attempt) {
    try {
      return backend.generate(request);
    } catch (const Error& e) {
      if (!e.retryable() || attempt >= attempts) throw;
      auto wait = backoff;
      if (const auto* limited = dynamic_cast<const RateLimited*>(&e)) {
        wait = std::max(wait, limited->retry_after());
      }
      if (policy.sleep) {
        policy.sleep(wait);
      } else {
        std::this_thread::sleep_for(wait);
      }
      backoff = std::chrono::milliseconds(
          static_cast<long long>(static_cast<double>(backoff.count()) * policy.multiplier));
    }
  }
}

Prediction predict_traced(const Backend& backend, const BackendSpec& spec,
                          const PromptTemplate& prompt, const MaskedDocument& doc,
                          std::string_view visible_text, const RetryPolicy& retry,
                          std::uint64_t seed) {
  spec.validate();
  GenerationRequest request;
  request.task = spec.task;
  request.prompt = prompt.render(visible_text, doc.mask_token());
  request.visible_text = visible_text;
  request.mask_token = doc.mask_token();
  request.decoding = spec.decoding;
  request.candidates = spec.decoding.candidates(spec.top_n);
  request.seed = seed;
  request.document = &doc;

  auto response = generate_with_retry(backend, request, retry);
  auto candidates = parse_candidates(spec.task, response.texts, request.candidates);
  return Prediction{
      PredictionSet(doc.id(), std::move(candidates), request.candidates, spec.id, spec.decoding),
      std::move(request.prompt), std::move(response.raw)};
}

PredictionSet predict(const Backend& backend, const BackendSpec& spec,
                      const PromptTemplate& prompt, const MaskedDocument& doc,
                      const RetryPolicy& retry) {
  if (doc.masked_text().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "document " + doc.id() + " has no text");
  }
  auto visible = truncate_input(doc.masked_text(), spec.max_input_chars, doc.mask_token());
  return predict_traced(backend, spec, prompt, doc, visible, retry).set;
}

std::vector<Vector> Embedder::embed(std::span<const std::string> texts) const {
  auto vectors = embed_batch(texts);
  if (vectors.size() != texts.size()) {
    throw Error(ErrorCode::kMalformedResponse,
                "embedder " + id() + " returned " + std::to_string(vectors.size()) +
                    " vectors for " + std::to_string(texts.size()) + " inputs");
  }
  for (const auto& v : vectors) {
    if (v.empty()) throw Error(ErrorCode::kMalformedResponse, "embedder " + id() + " returned an empty vector");
    std::size_t expected = 0;
    if (!dimension_.compare_exchange_strong(expected, v.size()) && expected != v.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedder " + id() + " switched from dimension " + std::to_string(expected) +
                      " to " + std::to_string(v.size()));
    }
  }
  return vectors;
}

}  // namespace reident
