// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "reident/baselines.hpp"
#include "reident/error.hpp"
#include "test_support.hpp"

using namespace reident;
using namespace reident::baselines;

TEST_CASE("bundled pools load") {
  auto random = NamePool::random_default();
  CHECK(random.first_names().size() == 50);
  CHECK(random.last_names().size() == 50);
  auto majority = NamePool::majority_default();
  CHECK(majority.first_names().size() == 20);
  CHECK(majority.last_names().size() == 20);
  CHECK_THROWS_AS(NamePool({}, {"Smith"}), Error);
}

TEST_CASE("parse_lines trims and drops blanks") {
  CHECK(parse_lines("  Ann \n\n\tBob\r\n") == std::vector<std::string>{"Ann", "Bob"});
  CHECK_THROWS_AS(read_lines("/nonexistent/names.txt"), Error);
}

TEST_CASE("from_full_names takes first and last tokens") {
  auto pool = NamePool::from_full_names({"Mary Ann Smith", "Bo Li"});
  CHECK(pool.first_names() == std::vector<std::string>{"Mary", "Bo"});
  CHECK(pool.last_names() == std::vector<std::string>{"Smith", "Li"});
}

TEST_CASE("sampler draws are reproducible and in range") {
  SeededSampler a(42);
  SeededSampler b(42);
  for (int i = 0; i < 1000; ++i) {
    auto x = a.below(7);
    CHECK(x == b.below(7));
    CHECK(x < 7);
  }
  CHECK(SeededSampler(1).below(1) == 0);
  CHECK_THROWS_AS(SeededSampler(1).below(0), Error);
  auto d = SeededSampler(9).distinct(10, 10);
  CHECK(std::set<std::size_t>(d.begin(), d.end()).size() == 10);
}

TEST_CASE("sampler is close to uniform") {
  SeededSampler s(7);
  std::map<std::size_t, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[s.below(6)];
  double chi2 = 0;
  for (auto& [k, c] : counts) chi2 += std::pow(c - draws / 6.0, 2) / (draws / 6.0);
  // 5 degrees of freedom; 20.5 is the 0.999 quantile.
  CHECK(chi2 < 20.5);
}

TEST_CASE("random baseline pairs distinct first and last names") {
  auto pool = NamePool::random_default();
  auto set = random_baseline(pool, 123, 5, "doc");
  CHECK(set.size() == 5);
  CHECK(set.backend_id() == "baseline:random");
  std::set<std::string> firsts;
  std::set<std::string> lasts;
  for (const auto& p : set.predictions()) {
    auto parts = testing::ascii_tokens(p);
    REQUIRE(parts.size() == 2);
    firsts.insert(parts[0]);
    lasts.insert(parts[1]);
  }
  CHECK(firsts.size() == 5);
  CHECK(lasts.size() == 5);
  CHECK(random_baseline(pool, 123, 5).predictions() == set.predictions());
  CHECK(random_baseline(pool, 124, 5).predictions() != set.predictions());
  CHECK(example_seed(5, "a") != example_seed(5, "b"));
  NamePool tiny({"A", "B"}, {"C", "D"});
  try {
    random_baseline(tiny, 1, 3);
    FAIL("expected PoolTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPoolTooSmall);
  }
}

TEST_CASE("majority baseline is the head of both lists") {
  NamePool pool({"James", "Mary", "John"}, {"Smith", "Johnson", "Williams"});
  CHECK(majority_baseline(pool, 2).predictions() ==
        std::vector<std::string>{"James Smith", "Mary Johnson"});
}

TEST_CASE("baseline backend reseeds per document") {
  BaselineBackend backend(BaselineKind::kRandom, NamePool::random_default());
  auto d1 = testing::make_doc("d1", "<mask> a");
  auto d2 = testing::make_doc("d2", "<mask> b");
  GenerationRequest r1;
  r1.document = &d1;
  r1.candidates = 5;
  r1.seed = 9;
  auto r2 = r1;
  r2.document = &d2;
  auto a = backend.generate(r1).texts;
  CHECK(a == backend.generate(r1).texts);
  CHECK(a != backend.generate(r2).texts);
  CHECK(a == random_baseline(NamePool::random_default(), example_seed(9, "d1"), 5).predictions());
}
