// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "reident/error.hpp"
#include "reident/model.hpp"
#include "test_support.hpp"

using namespace reident;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("normalize_name collapses whitespace and keeps initials") {
  auto t = normalize_name("  Martin   Luther\tKing  Jr. ");
  CHECK(t.full_name() == "Martin Luther King Jr.");
  CHECK(t.parts().size() == 4);
  CHECK(t.last_name() == "Jr.");
  auto j = normalize_name("J. R. R. Tolkien");
  CHECK(j.parts().front() == "J.");
  CHECK(normalize_name("Jean-Paul O'Neil").parts().size() == 2);
  CHECK(code_of([] { normalize_name(" \t "); }) == ErrorCode::kEmptyName);
}

TEST_CASE("masked documents enforce their invariants") {
  using testing::make_doc;
  CHECK_NOTHROW(make_doc("a", "<mask> was born.", "Ada Lovelace"));
  CHECK(code_of([] { make_doc("a", "nobody here", "Ada Lovelace"); }) ==
        ErrorCode::kInvariantViolation);
  CHECK(code_of([] { make_doc("a", "<mask> met ADA LOVELACE.", "Ada Lovelace"); }) ==
        ErrorCode::kInvariantViolation);
  // A single part of the name is not a leak of the full name.
  CHECK_NOTHROW(make_doc("a", "<mask> met Lovelace.", "Ada Lovelace"));

  MaskedDocument::Init init;
  init.id = "p";
  init.masked_text = "[X] spoke.";
  init.mask_token = "[X]";
  init.target = normalize_name("Ada Lovelace");
  init.paraphrased_text = "ada lovelace spoke";
  CHECK(code_of([&] { MaskedDocument{init}; }) == ErrorCode::kInvariantViolation);
  init.paraphrased_text = "[X] talked.";
  CHECK(MaskedDocument(init).mask_token() == "[X]");
}

TEST_CASE("document kinds round-trip") {
  for (auto k : {DocumentKind::kWikipedia, DocumentKind::kRuling, DocumentKind::kOther}) {
    CHECK(parse_document_kind(to_string(k)) == k);
  }
  CHECK(code_of([] { parse_document_kind("blog"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("decoding specs parse, print and validate") {
  CHECK(DecodingSpec::parse("greedy").is_greedy());
  CHECK(DecodingSpec::parse("beam:3").to_string() == "beam:3");
  CHECK(DecodingSpec::parse("beam").to_string() == "beam:5");
  CHECK(DecodingSpec::parse("top_k:40").to_string() == "top_k:40");
  CHECK(DecodingSpec::parse("top_p:0.5").to_string() == "top_p:0.5");
  CHECK(DecodingSpec::parse("greedy").candidates(5) == 1);
  CHECK(DecodingSpec::parse("beam:2").candidates(5) == 5);
  CHECK(DecodingSpec{} == DecodingSpec::parse("beam:5", 1.0));
  CHECK(code_of([] { DecodingSpec::parse("beam:0"); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { DecodingSpec::parse("top_p:1.5"); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { DecodingSpec::parse("top_k:x"); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { DecodingSpec::parse("nucleus"); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { DecodingSpec::parse("greedy", -0.1); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("prediction sets bound their size") {
  PredictionSet s("d", {"A", "B"}, 2, "b", DecodingSpec{});
  CHECK(s.size() == 2);
  CHECK_FALSE(s.empty());
  CHECK(code_of([] { PredictionSet("d", {"A"}, 0, "b", DecodingSpec{}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { PredictionSet("d", {"A", "B", "C"}, 2, "b", DecodingSpec{}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("errors keep code, message and subclass data") {
  Error e(ErrorCode::kParseError, "bad line");
  CHECK(e.message() == "bad line");
  CHECK(std::string(e.what()).find("bad line") != std::string::npos);
  CHECK_FALSE(e.retryable());
  RateLimited r("slow down", std::chrono::milliseconds(1500));
  CHECK(r.retryable());
  CHECK(r.retry_after().count() == 1500);
  CorpusError c(ErrorCode::kParseError, 7, "missing id");
  CHECK(c.line() == 7);
  StageError s("embed", Error(ErrorCode::kZeroVector, "zero"));
  CHECK(s.stage() == "embed");
  CHECK(s.code() == ErrorCode::kZeroVector);
  for (int i = 0; i <= static_cast<int>(ErrorCode::kIo); ++i) {
    auto code = static_cast<ErrorCode>(i);
    CHECK(parse_error_code(to_string(code)) == code);
  }
}
