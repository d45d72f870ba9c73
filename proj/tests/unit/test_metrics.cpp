// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "reident/error.hpp"
#include "reident/metrics.hpp"
#include "test_support.hpp"

using namespace reident;
using namespace reident::metrics;

namespace {

PredictionSet preds(std::vector<std::string> p) {
  auto n = std::max<std::size_t>(p.size(), 1);
  return PredictionSet("d", std::move(p), n, "test", DecodingSpec{});
}

}  // namespace

TEST_CASE("levenshtein on known pairs") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("flaw", "lawn") == 2);
  CHECK(levenshtein("Alina Cooper", "Alice Cooper") == 2);
  // Scalar values, not bytes: one substitution.
  CHECK(levenshtein("Müller", "Muller") == 1);
  CHECK(levenshtein("Зоя", "Зоя") == 0);
}

TEST_CASE("partial match works in both directions") {
  auto t = normalize_name("Gertrude Scharff Goldhaber");
  CHECK(pnms_match(t, "Maurice Goldhaber"));
  CHECK(pnms_match(t, "SCHARFF"));
  CHECK(pnms_match(t, "Gert"));  // a prefix token inside a part
  CHECK_FALSE(pnms_match(t, "G."));  // too short to count in reverse
  CHECK_FALSE(pnms_match(t, "Emmy Noether"));
  CHECK(lnms_match(t, "Mrs. Goldhaber"));
  CHECK_FALSE(lnms_match(t, "Gertrude Stein"));
}

TEST_CASE("min_nld divides by the target length and rejects empty sets") {
  auto t = normalize_name("Alina Cooper");
  std::vector<std::string> p{"Alice Cooper"};
  CHECK(min_nld(t, p) == doctest::Approx(2.0 / 12.0));
  std::vector<std::string> q{"Nobody", "Alina Cooper"};
  CHECK(min_nld(t, q) == 0.0);
  try {
    min_nld(t, std::span<const std::string>{});
    FAIL("expected EmptyPredictionSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyPredictionSet);
  }
}

TEST_CASE("aggregate averages hits and distances over every example") {
  std::vector<PerExampleScores> ex{
      {"a", true, true, 0.0}, {"b", true, false, 0.5}, {"c", false, false, 1.0}, {"d", false, false, 0.5}};
  auto s = aggregate(ex);
  CHECK(s.pnms == doctest::Approx(0.5));
  CHECK(s.lnms == doctest::Approx(0.25));
  CHECK(s.nld == doctest::Approx(0.5));
  CHECK(s.w_pnms == doctest::Approx(0.35 * 0.5 + 0.65 * 0.25));
  CHECK(s.example_count == 4);
  CHECK_THROWS_AS(aggregate(std::span<const PerExampleScores>{}), Error);
  CHECK_THROWS_AS(aggregate(ex, 1.5), Error);
  CHECK(aggregate(ex, 1.0).w_pnms == doctest::Approx(s.pnms));
  CHECK(aggregate(ex, 0.0).w_pnms == doctest::Approx(s.lnms));
}

TEST_CASE("an lnms hit implies a pnms hit") {
  std::mt19937 rng(3);
  const std::vector<std::string> vocab{"ann", "anna", "berg", "Berger", "lee", "o'neil", "x", "ANN"};
  for (int i = 0; i < 2000; ++i) {
    auto pick = [&] { return vocab[rng() % vocab.size()]; };
    auto t = normalize_name(pick() + " " + pick());
    auto p = pick() + (rng() % 2 ? " " + pick() : std::string{});
    if (lnms_match(t, p)) CHECK(pnms_match(t, p));
    CHECK(pnms_match(t, p) == testing::oracle_token_match(t.parts(), p));
  }
}

TEST_CASE("score_example combines the per-prediction tests") {
  auto t = normalize_name("Anna Berger");
  auto s = score_example(t, preds({"Maria Lopez", "Tom Berger"}));
  CHECK(s.pnms_hit);
  CHECK(s.lnms_hit);
  CHECK(s.min_nld == doctest::Approx(4.0 / 11.0));
  auto miss = score_example(t, preds({"Anna Schmidt"}));
  CHECK(miss.pnms_hit);
  CHECK_FALSE(miss.lnms_hit);
}
