// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/mocks.hpp"

#include <algorithm>

#include "reident/masking.hpp"
#include "reident/text.hpp"

namespace reident::mocks {
namespace {

GenerationResponse respond(std::vector<std::string> texts) {
  GenerationResponse r;
  r.raw = text::join(texts, "\n");
  r.texts = std::move(texts);
  return r;
}

std::string target_name(const GenerationRequest& request) {
  if (request.document == nullptr || !request.document->target()) return "";
  return request.document->target()->full_name();
}

const std::vector<std::string>& fillers() {
  static const std::vector<std::string> names = {
      "Quillon Varga", "Ysolde Prentiss", "Orrin Kastell", "Thaddeus Wrenfold", "Marisol Ekwueme",
      "Bertil Osterhagen", "Cordelia Nakashima", "Ignatius Folarin", "Wilhelmina Strathy",
      "Zebulon Achterberg"};
  return names;
}

std::string strip_edges(std::string_view token) {
  auto chars = text::decode(token);
  std::size_t b = 0;
  std::size_t e = chars.size();
  while (b < e && !text::is_alnum(chars[b])) ++b;
  while (e > b && !text::is_alnum(chars[e - 1]) && chars[e - 1] != '.') --e;
  return text::encode(std::u32string_view(chars).substr(b, e - b));
}

bool is_initial(std::string_view token) {
  auto chars = text::decode(token);
  if (chars.size() < 2 || chars.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < chars.size(); i += 2) {
    if (!text::is_upper(chars[i]) || chars[i + 1] != '.') return false;
  }
  return true;
}

bool capitalized_word(std::string_view token) {
  auto chars = text::decode(token);
  if (chars.size() < 2 || !text::is_upper(chars[0])) return false;
  return std::all_of(chars.begin(), chars.end(), [](char32_t c) { return text::is_letter(c); });
}

}  // namespace

GenerationResponse OracleBackend::generate(const GenerationRequest& request) const {
  return respond({target_name(request)});
}

GenerationResponse ListBackend::generate(const GenerationRequest& request) const {
  std::vector<std::string> out(answers_.begin(),
                               answers_.begin() + static_cast<std::ptrdiff_t>(
                                                      std::min(answers_.size(), request.candidates)));
  return respond(std::move(out));
}

std::size_t RankedOracleBackend::target_rank(std::string_view document_id, std::size_t depth) {
  return static_cast<std::size_t>(text::fnv1a64(document_id) % std::max<std::size_t>(depth, 1));
}

GenerationResponse RankedOracleBackend::generate(const GenerationRequest& request) const {
  std::vector<std::string> out;
  std::size_t rank = request.document ? target_rank(request.document->id(), depth_) : depth_;
  for (std::size_t i = 0; i < depth_; ++i) {
    out.push_back(i == rank ? target_name(request) : fillers()[i % fillers().size()]);
  }
  if (out.size() > request.candidates) out.resize(request.candidates);
  return respond(std::move(out));
}

GenerationResponse ClueBackend::generate(const GenerationRequest& request) const {
  bool visible = request.visible_text.find(marker_) != std::string_view::npos;
  return respond({visible ? target_name(request) : fallback_});
}

GenerationResponse LeadSentencesBackend::generate(const GenerationRequest& request) const {
  auto sentences = masking::split_sentences(request.visible_text);
  if (sentences.size() > count_) sentences.resize(count_);
  GenerationResponse r;
  r.raw = text::join(sentences, " ");
  r.texts = {r.raw};
  return r;
}

std::set<std::string> ContextLinkerBackend::linking_keys(std::string_view passage) {
  std::set<std::string> keys;
  auto tokens = text::split_whitespace(passage);
  std::string initials;
  auto flush_initials = [&] {
    if (!initials.empty()) keys.insert(text::lower(initials));
    initials.clear();
  };
  for (const auto& raw : tokens) {
    auto token = strip_edges(raw);
    if (is_initial(token)) {
      initials += token;
      // "B.," ends a run of initials just like a following word does.
      if (raw.size() > token.size() && !raw.ends_with('.')) flush_initials();
      continue;
    }
    flush_initials();
    auto lowered = text::lower(token);
    while (!lowered.empty() && lowered.back() == '.') lowered.pop_back();
    auto chars = text::decode(lowered);
    bool alpha = std::all_of(chars.begin(), chars.end(), [](char32_t c) { return text::is_letter(c); });
    if (alpha && chars.size() >= 6) keys.insert(lowered);
  }
  flush_initials();
  return keys;
}

std::vector<std::string> ContextLinkerBackend::person_names(std::string_view passage) const {
  std::vector<std::string> names;
  auto tokens = text::split_whitespace(passage);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    auto first = strip_edges(tokens[i]);
    auto last = strip_edges(tokens[i + 1]);
    while (!last.empty() && last.back() == '.') last.pop_back();
    if (!capitalized_word(first) || !capitalized_word(last)) continue;
    if (!first_names_.contains(text::lower(first))) continue;
    names.push_back(first + " " + last);
  }
  return names;
}

GenerationResponse ContextLinkerBackend::generate(const GenerationRequest& request) const {
  auto frontier = linking_keys(request.visible_text);
  std::vector<bool> reached(request.documents.size(), false);
  std::vector<std::string> answers;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < request.documents.size(); ++i) {
      if (reached[i]) continue;
      auto keys = linking_keys(request.documents[i]);
      bool linked = std::any_of(keys.begin(), keys.end(),
                                [&](const std::string& k) { return frontier.contains(k); });
      if (!linked) continue;
      reached[i] = true;
      grew = true;
      frontier.insert(keys.begin(), keys.end());
      for (auto& name : person_names(request.documents[i])) {
        if (std::find(answers.begin(), answers.end(), name) == answers.end()) {
          answers.push_back(std::move(name));
        }
      }
    }
  }
  if (answers.empty()) answers.push_back("Unknown");
  if (answers.size() > request.candidates) answers.resize(request.candidates);
  return respond(std::move(answers));
}

std::vector<std::string> HashingEmbedder::tokens(std::string_view input) {
  std::vector<std::string> out;
  std::u32string current;
  for (char32_t c : text::fold(text::decode(input))) {
    if (text::is_alnum(c)) {
      current.push_back(c);
    } else if (!current.empty()) {
      out.push_back(text::encode(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(text::encode(current));
  return out;
}

std::vector<Vector> HashingEmbedder::embed_batch(std::span<const std::string> texts) const {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    Vector v(dimension_, 0.0f);
    auto toks = tokens(t);
    if (toks.empty()) v[0] = 1.0f;
    for (const auto& tok : toks) v[text::fnv1a64(tok) % dimension_] += 1.0f;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace reident::mocks
