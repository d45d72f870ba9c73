// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "reident/text.hpp"

using namespace reident;

TEST_CASE("decode and encode round-trip every scalar class") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::uint32_t> plane(0, 0x10FFFF);
  for (int i = 0; i < 2000; ++i) {
    std::u32string s;
    for (int j = 0; j < 8; ++j) {
      char32_t c = plane(rng);
      if (c >= 0xD800 && c <= 0xDFFF) c = 'x';
      s.push_back(c);
    }
    CHECK(text::decode(text::encode(s)) == s);
  }
}

TEST_CASE("malformed utf-8 decodes to replacement characters") {
  CHECK(text::decode("\xC0\x80") == std::u32string{0xFFFD});
  CHECK(text::decode("\xE2\x82") == std::u32string{0xFFFD, 0xFFFD});
  CHECK(text::decode("a\xFF" "b") == U"a�b");
  CHECK(text::decode("\xED\xA0\x80") == std::u32string{0xFFFD});
}

TEST_CASE("character counts and byte offsets use scalar values") {
  std::string s = "Zoë Ångström";
  CHECK(text::char_count(s) == 12);
  CHECK(text::byte_offset(s, 3) == 4);
  CHECK(text::byte_offset(s, 100) == s.size());
}

TEST_CASE("case folding covers Latin-1, Latin Extended-A, Greek and Cyrillic") {
  CHECK(text::lower("ÉMILE ZOLA") == "émile zola");
  CHECK(text::lower("ŁUKASZ") == "łukasz");
  CHECK(text::lower("ΣΩΚΡΆΤΗΣ").starts_with("σωκρ"));
  CHECK(text::lower("ЛЕВ ТОЛСТОЙ") == "лев толстой");
  CHECK(text::lower("ЁЖИК") == "ёжик");
  CHECK(text::fold(U'×') == U'×');
  CHECK(text::fold(U'Ÿ') == U'ÿ');
}

TEST_CASE("trim and split handle unicode whitespace") {
  CHECK(text::trim("  Anna \n") == "Anna");
  CHECK(text::trim("   ").empty());
  auto parts = text::split_whitespace("George  Orwell\t ");
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == "George");
  CHECK(parts[1] == "Orwell");
  CHECK(text::join(parts, "-") == "George-Orwell");
}

TEST_CASE("contains_ci and find_all") {
  CHECK(text::contains_ci("The Court heard MÜLLER", "müller"));
  CHECK_FALSE(text::contains_ci("abc", "abd"));
  CHECK(text::contains_ci("abc", ""));
  auto hits = text::find_all(U"aaaa", U"aa");
  CHECK(hits == std::vector<std::size_t>{0, 2});
  CHECK(text::find_all(U"abc", U"").empty());
}

TEST_CASE("fnv1a64 matches published test vectors") {
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(text::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
