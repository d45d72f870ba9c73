// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/masking.hpp"

#include <algorithm>

#include "reident/error.hpp"
#include "reident/parallel.hpp"
#include "reident/text.hpp"

namespace reident::masking {

std::string_view to_string(DropReason reason) noexcept {
  switch (reason) {
    case DropReason::kTooShort: return "too_short";
    case DropReason::kNoEarlyMask: return "no_early_mask";
    case DropReason::kNoMatch: return "no_match";
  }
  return "no_match";
}

bool filter_by_length(std::string_view text, std::size_t min_chars) {
  return text::char_count(text) > min_chars;
}

namespace {

bool word_char_at(const std::u32string& s, std::size_t i) {
  return i < s.size() && text::is_alnum(s[i]);
}

bool contains_whole_word(const std::u32string& haystack, const std::u32string& word) {
  for (std::size_t pos : text::find_all(haystack, word)) {
    bool left_ok = pos == 0 || !text::is_alnum(haystack[pos - 1]);
    bool right_ok = !word_char_at(haystack, pos + word.size());
    // A part that itself ends in punctuation ("J.") bounds itself.
    if (!word.empty() && !text::is_alnum(word.back())) right_ok = true;
    if (left_ok && right_ok) return true;
  }
  return false;
}

}  // namespace

bool shares_name_part(std::string_view surface, const TargetIdentity& target) {
  auto folded = text::fold(text::decode(surface));
  return std::any_of(target.parts().begin(), target.parts().end(), [&](const std::string& part) {
    return contains_whole_word(folded, text::fold(text::decode(part)));
  });
}

MaskResult mask_entities(std::string_view text_utf8, std::vector<EntitySpan> spans,
                         const TargetIdentity& target, std::string_view mask_token) {
  auto chars = text::decode(text_utf8);
  std::sort(spans.begin(), spans.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (s.start >= s.end || s.end > chars.size()) {
      throw Error(ErrorCode::kInvalidSpan, "span [" + std::to_string(s.start) + ", " +
                                               std::to_string(s.end) + ") out of range");
    }
    if (text::encode(std::u32string_view(chars).substr(s.start, s.end - s.start)) != s.surface) {
      throw Error(ErrorCode::kInvalidSpan, "span surface '" + s.surface + "' does not match text");
    }
    if (i > 0 && s.start < spans[i - 1].end) {
      throw Error(ErrorCode::kOverlappingSpans,
                  "'" + spans[i - 1].surface + "' overlaps '" + s.surface + "'");
    }
  }

  auto token = text::decode(mask_token);
  MaskResult result;
  std::u32string out;
  out.reserve(chars.size());
  std::size_t cursor = 0;
  for (const auto& s : spans) {
    if (s.label != EntityLabel::kPerson || !shares_name_part(s.surface, target)) continue;
    out.append(chars, cursor, s.start - cursor);
    out += token;
    cursor = s.end;
    ++result.report.masked_count;
  }
  out.append(chars, cursor, std::u32string::npos);
  result.masked_text = text::encode(out);
  if (result.report.masked_count == 0) result.report = MaskingReport::drop(DropReason::kNoMatch);
  return result;
}

std::size_t mask_full_name(std::string& text_utf8, const TargetIdentity& target,
                           std::string_view mask_token) {
  auto chars = text::decode(text_utf8);
  auto folded = text::fold(chars);
  auto name = text::fold(text::decode(target.full_name()));
  auto hits = text::find_all(folded, name);
  if (hits.empty()) return 0;
  auto token = text::decode(mask_token);
  std::u32string out;
  std::size_t cursor = 0;
  for (std::size_t pos : hits) {
    out.append(chars, cursor, pos - cursor);
    out += token;
    cursor = pos + name.size();
  }
  out.append(chars, cursor, std::u32string::npos);
  text_utf8 = text::encode(out);
  return hits.size();
}

bool has_early_mask(std::string_view masked_text, std::string_view mask_token,
                    std::size_t window_chars) {
  auto hits = text::find_all(text::decode(masked_text), text::decode(mask_token));
  return !hits.empty() && hits.front() < window_chars;
}

std::vector<std::string> split_sentences(std::string_view text_utf8) {
  auto chars = text::decode(text_utf8);
  std::vector<std::string> out;
  auto flush = [&](std::size_t begin, std::size_t end) {
    auto encoded = text::encode(std::u32string_view(chars).substr(begin, end - begin));
    auto piece = text::trim(encoded);
    if (!piece.empty()) out.emplace_back(piece);
  };
  std::size_t begin = 0;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    char32_t c = chars[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < chars.size() && text::is_space(chars[j])) ++j;
    if (j == i + 1 || j >= chars.size()) continue;
    char32_t n = chars[j];
    bool opener = text::is_upper(n) || n == '<' || n == '"' || n == 0x201C;
    if (!opener) continue;
    flush(begin, i + 1);
    begin = j;
    i = j - 1;
  }
  flush(begin, chars.size());
  return out;
}

std::string paraphrase_document(std::string_view text_utf8, const TextTransformProvider& provider,
                                std::size_t max_in_flight) {
  if (!provider.available()) {
    throw Error(ErrorCode::kProviderUnavailable, "paraphrase provider '" + provider.id() +
                                                     "' is not available");
  }
  auto sentences = split_sentences(text_utf8);
  if (sentences.empty()) {
    throw Error(ErrorCode::kSentenceSplitFailure, "no sentences in input text");
  }
  std::vector<std::string> rewritten(sentences.size());
  parallel_for(sentences.size(), max_in_flight,
               [&](std::size_t i) { rewritten[i] = provider.transform(sentences[i]); });
  return text::join(rewritten, " ");
}

PageOutcome mask_page(const RawPage& page, const PipelineOptions& options) {
  PageOutcome outcome{page.id, std::nullopt, {}};
  if (!filter_by_length(page.text, options.min_chars)) {
    outcome.report = MaskingReport::drop(DropReason::kTooShort);
    return outcome;
  }
  auto target = normalize_name(page.title);
  auto masked = mask_entities(page.text, page.spans, target, options.mask_token);
  if (masked.report.dropped) {
    outcome.report = masked.report;
    return outcome;
  }
  std::size_t count = masked.report.masked_count;
  count += mask_full_name(masked.masked_text, target, options.mask_token);

  std::optional<std::string> paraphrased;
  if (options.paraphraser) {
    paraphrased = paraphrase_document(masked.masked_text, *options.paraphraser,
                                      options.max_in_flight);
    mask_full_name(*paraphrased, target, options.mask_token);
    if (paraphrased->find(options.mask_token) == std::string::npos) {
      outcome.report = MaskingReport::drop(DropReason::kNoMatch, count);
      return outcome;
    }
  }

  bool early = has_early_mask(masked.masked_text, options.mask_token, options.window_chars);
  if (paraphrased) {
    early = early && has_early_mask(*paraphrased, options.mask_token, options.window_chars);
  }
  if (!early) {
    outcome.report = MaskingReport::drop(DropReason::kNoEarlyMask, count);
    return outcome;
  }

  outcome.document.emplace(MaskedDocument::Init{
      .id = page.id,
      .masked_text = std::move(masked.masked_text),
      .mask_token = options.mask_token,
      .target = target,
      .original_text = page.text,
      .paraphrased_text = std::move(paraphrased),
      .kind = page.kind,
  });
  outcome.report.masked_count = count;
  return outcome;
}

std::vector<PageOutcome> mask_corpus(const std::vector<RawPage>& pages,
                                     const PipelineOptions& options, std::size_t jobs) {
  std::vector<std::optional<PageOutcome>> slots(pages.size());
  parallel_for(pages.size(), jobs, [&](std::size_t i) { slots[i] = mask_page(pages[i], options); });
  std::vector<PageOutcome> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace reident::masking
