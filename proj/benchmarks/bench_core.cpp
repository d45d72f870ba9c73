// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "reident/metrics.hpp"
#include "reident/mocks.hpp"
#include "reident/rag.hpp"

namespace {

using namespace reident;

std::string random_text(std::mt19937_64& rng, std::size_t words) {
  static const std::vector<std::string> vocab{"court", "ruling", "pension", "fraud", "river",
                                              "club",  "anna",   "berger",  "case",  "appeal"};
  std::string s;
  for (std::size_t i = 0; i < words; ++i) s += vocab[rng() % vocab.size()] + " ";
  return s;
}

void BM_Levenshtein(benchmark::State& state) {
  std::string a(static_cast<std::size_t>(state.range(0)), 'a');
  std::string b = a;
  for (std::size_t i = 0; i < b.size(); i += 3) b[i] = 'b';
  for (auto _ : state) benchmark::DoNotOptimize(metrics::levenshtein(a, b));
}
BENCHMARK(BM_Levenshtein)->Arg(16)->Arg(64)->Arg(256);

void BM_ScoreExample(benchmark::State& state) {
  auto target = normalize_name("Gertrude Scharff Goldhaber");
  PredictionSet set("d", {"Maurice Goldhaber", "Lise Meitner", "Emmy Noether", "G. S.", "Trude"}, 5,
                    "bench", DecodingSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(metrics::score_example(target, set));
}
BENCHMARK(BM_ScoreExample);

void BM_Query(benchmark::State& state) {
  std::mt19937_64 rng(1);
  mocks::HashingEmbedder embedder(256);
  std::vector<rag::Chunk> chunks;
  for (int i = 0; i < state.range(0); ++i) {
    chunks.push_back({"c" + std::to_string(i), "a", random_text(rng, 40), std::nullopt});
  }
  auto index = rag::ChunkIndex::build(std::move(chunks), embedder);
  std::vector<std::string> q{random_text(rng, 30)};
  auto qv = embedder.embed(q).front();
  for (auto _ : state) benchmark::DoNotOptimize(rag::query(index, qv, 5));
}
BENCHMARK(BM_Query)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
