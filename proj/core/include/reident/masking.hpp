// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Building masked corpora from person-centric pages: length filtering,
// replacing person entities that share a name part with the page's title,
// rejecting pages without an early mask, and an optional sentence-level
// paraphrasing pass. Entity spans come from an external tagger.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reident/model.hpp"

namespace reident::masking {

inline constexpr std::size_t kDefaultMinChars = 4000;
inline constexpr std::size_t kDefaultMaskWindow = 1000;

enum class EntityLabel { kPerson, kOther };

/// Character (not byte) offsets into the source text; `end` is exclusive.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  EntityLabel label = EntityLabel::kPerson;
};

enum class DropReason { kTooShort, kNoEarlyMask, kNoMatch };

std::string_view to_string(DropReason reason) noexcept;

struct MaskingReport {
  std::size_t masked_count = 0;
  bool dropped = false;
  std::optional<DropReason> drop_reason;

  static MaskingReport drop(DropReason reason, std::size_t masked = 0) {
    return {masked, true, reason};
  }
};

struct MaskResult {
  std::string masked_text;
  MaskingReport report;
};

/// True iff `text` has strictly more than `min_chars` characters.
bool filter_by_length(std::string_view text, std::size_t min_chars = kDefaultMinChars);

/// True when `name_part` occurs in `surface` as a whole word, ignoring case.
bool shares_name_part(std::string_view surface, const TargetIdentity& target);

/// Replaces every person span sharing a name part with the target by
/// `mask_token`. Throws OverlappingSpans, or InvalidSpan when a span is out
/// of range or its surface does not match the text.
MaskResult mask_entities(std::string_view text, std::vector<EntitySpan> spans,
                         const TargetIdentity& target,
                         std::string_view mask_token = kDefaultMaskToken);

/// Masks remaining case-insensitive occurrences of the full name. Returns
/// the number of replacements.
std::size_t mask_full_name(std::string& text, const TargetIdentity& target,
                           std::string_view mask_token);

/// True iff a mask token starts within the first `window_chars` characters.
bool has_early_mask(std::string_view masked_text, std::string_view mask_token = kDefaultMaskToken,
                    std::size_t window_chars = kDefaultMaskWindow);

/// Splits after '.', '!' or '?' when followed by whitespace and an uppercase
/// letter (or an opening quote/mask). Abbreviations such as "Dr. Smith" are
/// split too.
std::vector<std::string> split_sentences(std::string_view text);

/// A sentence-level rewriting service (paraphraser). Implementations must be
/// safe to call from several threads at once.
class TextTransformProvider {
 public:
  virtual ~TextTransformProvider() = default;
  virtual std::string id() const = 0;
  virtual bool available() const { return true; }
  virtual std::string transform(std::string_view sentence) const = 0;
};

class IdentityProvider final : public TextTransformProvider {
 public:
  std::string id() const override { return "identity"; }
  std::string transform(std::string_view sentence) const override { return std::string(sentence); }
};

/// Wraps each sentence as prefix + sentence + suffix. Test double.
class WrapProvider final : public TextTransformProvider {
 public:
  WrapProvider(std::string prefix, std::string suffix)
      : prefix_(std::move(prefix)), suffix_(std::move(suffix)) {}
  std::string id() const override { return "wrap"; }
  std::string transform(std::string_view sentence) const override {
    return prefix_ + std::string(sentence) + suffix_;
  }

 private:
  std::string prefix_;
  std::string suffix_;
};

/// Generation parameters forwarded untouched to a remote paraphraser.
struct ParaphraseParams {
  std::size_t num_beams = 10;
  double temperature = 1.5;
};

/// Sends each sentence to `provider` independently (at most `max_in_flight`
/// concurrently) and joins the outputs with single spaces. Throws
/// ProviderUnavailable or SentenceSplitFailure for blank input.
std::string paraphrase_document(std::string_view text, const TextTransformProvider& provider,
                                std::size_t max_in_flight = 1);

/// One input record of the masking pipeline.
struct RawPage {
  std::string id;
  std::string title;
  std::string text;
  std::vector<EntitySpan> spans;
  DocumentKind kind = DocumentKind::kWikipedia;
};

struct PipelineOptions {
  std::size_t min_chars = kDefaultMinChars;
  std::size_t window_chars = kDefaultMaskWindow;
  std::string mask_token{kDefaultMaskToken};
  const TextTransformProvider* paraphraser = nullptr;
  std::size_t max_in_flight = 4;
};

struct PageOutcome {
  std::string id;
  std::optional<MaskedDocument> document;
  MaskingReport report;
};

/// length filter -> span masking -> full-name sweep -> optional paraphrase
/// of the masked text (re-swept) -> early-mask check on every variant.
PageOutcome mask_page(const RawPage& page, const PipelineOptions& options);

std::vector<PageOutcome> mask_corpus(const std::vector<RawPage>& pages,
                                     const PipelineOptions& options, std::size_t jobs = 1);

}  // namespace reident::masking
