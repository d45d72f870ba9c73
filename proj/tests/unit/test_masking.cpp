// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <atomic>
#include <random>

#include "reident/error.hpp"
#include "reident/io.hpp"
#include "reident/masking.hpp"
#include "reident/text.hpp"
#include "test_support.hpp"

using namespace reident;
using namespace reident::masking;

namespace {

EntitySpan span_of(std::string_view text, std::string_view surface, std::size_t from = 0,
                   EntityLabel label = EntityLabel::kPerson) {
  auto chars = text::decode(text);
  auto needle = text::decode(surface);
  auto pos = chars.find(needle, from);
  REQUIRE(pos != std::u32string::npos);
  return {pos, pos + needle.size(), std::string(surface), label};
}

class CountingProvider final : public TextTransformProvider {
 public:
  std::string id() const override { return "count"; }
  std::string transform(std::string_view s) const override {
    ++calls;
    return "[" + std::string(s) + "]";
  }
  mutable std::atomic<int> calls{0};
};

class OfflineProvider final : public TextTransformProvider {
 public:
  std::string id() const override { return "offline"; }
  bool available() const override { return false; }
  std::string transform(std::string_view s) const override { return std::string(s); }
};

class NameDropper final : public TextTransformProvider {
 public:
  std::string id() const override { return "drop"; }
  std::string transform(std::string_view) const override { return "Someone did something."; }
};

}  // namespace

TEST_CASE("length filter is strictly greater than the threshold") {
  CHECK_FALSE(filter_by_length(std::string(4000, 'a')));
  CHECK(filter_by_length(std::string(4001, 'a')));
  CHECK(filter_by_length("äöü", 2));
  CHECK_FALSE(filter_by_length("äöü", 3));
}

TEST_CASE("name parts match whole words only") {
  auto t = normalize_name("Gertrude Scharff Goldhaber");
  CHECK(shares_name_part("Maurice Goldhaber", t));
  CHECK(shares_name_part("GOLDHABER", t));
  CHECK_FALSE(shares_name_part("Goldhabers", t));
  CHECK_FALSE(shares_name_part("Emmy Noether", t));
  auto j = normalize_name("J. Smith");
  CHECK(shares_name_part("J. Doe", j));
}

TEST_CASE("mask_entities replaces matching person spans only") {
  std::string text =
      "Gertrude Scharff Goldhaber was a physicist. She married Maurice Goldhaber. "
      "Lise Meitner wrote to Goldhaber Street.";
  auto t = normalize_name("Gertrude Scharff Goldhaber");
  std::vector<EntitySpan> spans{span_of(text, "Gertrude Scharff Goldhaber"),
                                span_of(text, "Maurice Goldhaber"), span_of(text, "Lise Meitner"),
                                span_of(text, "Goldhaber Street", 0, EntityLabel::kOther)};
  auto r = mask_entities(text, spans, t);
  CHECK(r.report.masked_count == 2);
  CHECK_FALSE(r.report.dropped);
  CHECK(r.masked_text ==
        "<mask> was a physicist. She married <mask>. Lise Meitner wrote to Goldhaber Street.");
}

TEST_CASE("mask_entities validates spans") {
  auto t = normalize_name("Ada Lovelace");
  std::string text = "Ada Lovelace met Charles Babbage.";
  auto bad_range = std::vector<EntitySpan>{{10, 99, "x", EntityLabel::kPerson}};
  CHECK_THROWS_WITH_AS(mask_entities(text, bad_range, t), doctest::Contains("range"), Error);
  auto bad_surface = std::vector<EntitySpan>{{0, 3, "Bob", EntityLabel::kPerson}};
  try {
    mask_entities(text, bad_surface, t);
    FAIL("expected InvalidSpan");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidSpan);
  }
  auto overlap = std::vector<EntitySpan>{{0, 12, "Ada Lovelace", EntityLabel::kPerson},
                                         {4, 12, "Lovelace", EntityLabel::kPerson}};
  try {
    mask_entities(text, overlap, t);
    FAIL("expected OverlappingSpans");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOverlappingSpans);
  }
  auto none = mask_entities(text, {span_of(text, "Charles Babbage")}, t);
  CHECK(none.report.dropped);
  CHECK(none.report.drop_reason == DropReason::kNoMatch);
}

TEST_CASE("span offsets are characters, not bytes") {
  std::string text = "Émile Zola wrote; Zola died.";
  auto t = normalize_name("Émile Zola");
  auto r = mask_entities(text, {span_of(text, "Émile Zola"), span_of(text, "Zola", 12)}, t);
  CHECK(r.masked_text == "<mask> wrote; <mask> died.");
}

TEST_CASE("full-name sweep is case-insensitive") {
  std::string text = "ADA LOVELACE and ada lovelace.";
  CHECK(mask_full_name(text, normalize_name("Ada Lovelace"), "<mask>") == 2);
  CHECK(text == "<mask> and <mask>.");
}

TEST_CASE("early mask window counts characters from the start") {
  CHECK(has_early_mask("<mask> x", "<mask>", 1));
  CHECK_FALSE(has_early_mask("abc <mask>", "<mask>", 4));
  CHECK(has_early_mask("abc <mask>", "<mask>", 5));
  CHECK(has_early_mask("ééé <mask>", "<mask>", 5));
  CHECK_FALSE(has_early_mask("no token", "<mask>", 1000));
}

TEST_CASE("sentence splitting") {
  auto s = split_sentences("Dr. Smith came. <mask> left! Why? \"Yes.\" he said. e.g. this");
  REQUIRE(s.size() == 5);
  CHECK(s[0] == "Dr.");
  CHECK(s[1] == "Smith came.");
  CHECK(s[2] == "<mask> left!");
  CHECK(s[3] == "Why?");
  CHECK(s[4] == "\"Yes.\" he said. e.g. this");
  CHECK(split_sentences("   ").empty());
}

TEST_CASE("paraphrasing calls the provider once per sentence") {
  CountingProvider p;
  CHECK(paraphrase_document("One here. Two there. Three.", p, 3) == "[One here.] [Two there.] [Three.]");
  CHECK(p.calls == 3);
  CHECK_THROWS_AS(paraphrase_document("x", OfflineProvider{}), Error);
  try {
    paraphrase_document("  ", p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSentenceSplitFailure);
  }
}

TEST_CASE("mask_page on the fixture pages") {
  auto pages = io::load_raw_pages(testing::fixture("pages.jsonl"));
  REQUIRE(pages.size() == 3);
  PipelineOptions opts;
  opts.min_chars = 100;
  auto outcomes = mask_corpus(pages, opts, 2);
  REQUIRE(outcomes.size() == 3);
  REQUIRE(outcomes[0].document);
  const auto& doc = *outcomes[0].document;
  CHECK(doc.masked_text().find("Goldhaber") == std::string::npos);
  CHECK(doc.masked_text().starts_with("<mask>"));
  CHECK(doc.target()->full_name() == "Gertrude Scharff Goldhaber");
  CHECK(doc.original_text().has_value());
  CHECK(outcomes[1].report.drop_reason == DropReason::kTooShort);
  CHECK(outcomes[2].report.drop_reason == DropReason::kNoMatch);

  opts.window_chars = 0;
  CHECK(mask_page(pages[0], opts).report.drop_reason == DropReason::kNoEarlyMask);
}

TEST_CASE("paraphrased variants keep or lose the page") {
  auto pages = io::load_raw_pages(testing::fixture("pages.jsonl"));
  PipelineOptions opts;
  opts.min_chars = 100;
  WrapProvider wrap("P(", ")");
  opts.paraphraser = &wrap;
  auto kept = mask_page(pages[0], opts);
  REQUIRE(kept.document);
  REQUIRE(kept.document->paraphrased_text());
  CHECK(kept.document->paraphrased_text()->starts_with("P(<mask>"));

  NameDropper dropper;
  opts.paraphraser = &dropper;
  CHECK(mask_page(pages[0], opts).report.drop_reason == DropReason::kNoMatch);
}

TEST_CASE("masked output never contains the full name") {
  std::mt19937 rng(5);
  const std::vector<std::string> firsts{"Ada", "Emil", "Zoë", "Ivan"};
  const std::vector<std::string> lasts{"Lovelace", "Ström", "Petrov"};
  for (int i = 0; i < 300; ++i) {
    auto name = firsts[rng() % firsts.size()] + " " + lasts[rng() % lasts.size()];
    std::string text = name + " was here. Later " + text::lower(name) + " left; " + name + ".";
    std::vector<EntitySpan> spans{span_of(text, name)};
    RawPage page{"p", name, text, spans, DocumentKind::kWikipedia};
    PipelineOptions opts;
    opts.min_chars = 10;
    auto out = mask_page(page, opts);
    REQUIRE(out.document);
    CHECK_FALSE(text::contains_ci(out.document->masked_text(), name));
  }
}
