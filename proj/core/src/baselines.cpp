// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/baselines.hpp"

#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "reident/builtin_data.hpp"
#include "reident/error.hpp"
#include "reident/text.hpp"

namespace reident::baselines {

NamePool::NamePool(std::vector<std::string> first_names, std::vector<std::string> last_names)
    : first_(std::move(first_names)), last_(std::move(last_names)) {
  if (first_.empty() || last_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "name pool needs first and last names");
  }
}

NamePool NamePool::from_full_names(const std::vector<std::string>& names) {
  std::vector<std::string> first;
  std::vector<std::string> last;
  for (const auto& n : names) {
    auto id = normalize_name(n);
    first.push_back(id.parts().front());
    last.push_back(id.last_name());
  }
  return NamePool(std::move(first), std::move(last));
}

NamePool NamePool::random_default() {
  return from_full_names(parse_lines(builtin::random_pool()));
}

NamePool NamePool::majority_default() {
  return NamePool(parse_lines(builtin::majority_first_names()),
                  parse_lines(builtin::majority_last_names()));
}

std::vector<std::string> parse_lines(std::string_view contents) {
  std::vector<std::string> out;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lines(buf.str());
}

std::uint64_t example_seed(std::uint64_t seed, std::string_view document_id) {
  return seed ^ text::fnv1a64(document_id);
}

std::size_t SeededSampler::below(std::size_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "empty sampling range");
  const auto range = static_cast<std::uint64_t>(bound);
  // Largest multiple of range that fits; values above it would bias low indices.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % range);
}

std::vector<std::size_t> SeededSampler::distinct(std::size_t size, std::size_t count) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count && i < size; ++i) {
    std::swap(idx[i], idx[i + below(size - i)]);
  }
  idx.resize(std::min(count, size));
  return idx;
}

namespace {

void require_pool(const NamePool& pool, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "baseline needs n >= 1");
  if (pool.first_names().size() < n || pool.last_names().size() < n) {
    throw Error(ErrorCode::kPoolTooSmall,
                "pool has " + std::to_string(pool.first_names().size()) + " first and " +
                    std::to_string(pool.last_names().size()) + " last names, need " +
                    std::to_string(n));
  }
}

}  // namespace

PredictionSet random_baseline(const NamePool& pool, std::uint64_t seed, std::size_t n,
                              std::string document_id) {
  require_pool(pool, n);
  SeededSampler sampler(seed);
  auto firsts = sampler.distinct(pool.first_names().size(), n);
  auto lasts = sampler.distinct(pool.last_names().size(), n);
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(pool.first_names()[firsts[i]] + " " + pool.last_names()[lasts[i]]);
  }
  return PredictionSet(std::move(document_id), std::move(names), n, "baseline:random",
                       DecodingSpec());
}

PredictionSet majority_baseline(const NamePool& pool, std::size_t n, std::string document_id) {
  require_pool(pool, n);
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(pool.first_names()[i] + " " + pool.last_names()[i]);
  }
  return PredictionSet(std::move(document_id), std::move(names), n, "baseline:majority",
                       DecodingSpec());
}

GenerationResponse BaselineBackend::generate(const GenerationRequest& request) const {
  std::string id = request.document ? request.document->id() : std::string();
  auto set = kind_ == BaselineKind::kRandom
                 ? random_baseline(pool_, example_seed(request.seed, id), request.candidates, id)
                 : majority_baseline(pool_, request.candidates, id);
  GenerationResponse r;
  r.texts = set.predictions();
  r.raw = text::join(r.texts, "\n");
  return r;
}

}  // namespace reident::baselines
