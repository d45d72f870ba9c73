// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Reference predictors that know nothing about the document: a seeded
// random pairing of pool names and the "most common names" guess.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "reident/backends.hpp"
#include "reident/model.hpp"

namespace reident::baselines {

inline constexpr std::size_t kDefaultCandidates = 5;

class NamePool {
 public:
  /// Throws InvalidArgument when either list is empty.
  NamePool(std::vector<std::string> first_names, std::vector<std::string> last_names);

  /// Splits "First Last" lines into the two lists (first and last token).
  static NamePool from_full_names(const std::vector<std::string>& names);

  /// Bundled pools.
  static NamePool random_default();
  static NamePool majority_default();

  const std::vector<std::string>& first_names() const noexcept { return first_; }
  const std::vector<std::string>& last_names() const noexcept { return last_; }

 private:
  std::vector<std::string> first_;
  std::vector<std::string> last_;
};

/// Non-blank, trimmed lines of a plain-text list.
std::vector<std::string> parse_lines(std::string_view contents);
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Per-document seed: the run seed mixed with a hash of the document id.
std::uint64_t example_seed(std::uint64_t seed, std::string_view document_id);

/// Uniform draws whose sequence is fixed by the standard for a given seed
/// (std::uniform_int_distribution is not, so bounds use rejection here).
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t bound);

  /// `count` distinct indices of [0, size) via a partial Fisher-Yates shuffle.
  std::vector<std::size_t> distinct(std::size_t size, std::size_t count);

 private:
  std::mt19937_64 engine_;
};

/// n names "First Last", the first and last names each drawn without
/// replacement. Throws PoolTooSmall if either list has fewer than n entries.
PredictionSet random_baseline(const NamePool& pool, std::uint64_t seed,
                              std::size_t n = kDefaultCandidates,
                              std::string document_id = {});

/// Candidate i pairs first_names[i] with last_names[i].
PredictionSet majority_baseline(const NamePool& pool, std::size_t n = kDefaultCandidates,
                                std::string document_id = {});

enum class BaselineKind { kRandom, kMajority };

/// Baselines behind the Backend interface so the harness can score them
/// like any model. The random baseline re-samples per document from
/// example_seed(request.seed, document id).
class BaselineBackend final : public Backend {
 public:
  BaselineBackend(BaselineKind kind, NamePool pool) : kind_(kind), pool_(std::move(pool)) {}
  GenerationResponse generate(const GenerationRequest& request) const override;

 private:
  BaselineKind kind_;
  NamePool pool_;
};

}  // namespace reident::baselines
