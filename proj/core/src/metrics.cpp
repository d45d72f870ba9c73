// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "reident/error.hpp"
#include "reident/text.hpp"

namespace reident::metrics {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  auto s = text::decode(a);
  auto t = text::decode(b);
  if (s.size() < t.size()) std::swap(s, t);
  std::vector<std::size_t> row(t.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= s.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      std::size_t up = row[j];
      std::size_t cost = s[i - 1] == t[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[t.size()];
}

namespace {

// Folded parts of `name` against the folded whitespace tokens of a prediction.
bool any_containment(const std::vector<std::u32string>& parts, std::string_view prediction) {
  auto folded = text::fold(text::decode(prediction));
  for (const auto& part : parts) {
    if (folded.find(part) != std::u32string::npos) return true;
  }
  for (const auto& token : text::split_whitespace(prediction)) {
    auto t = text::fold(text::decode(token));
    if (t.size() < kMinReverseTokenChars) continue;
    for (const auto& part : parts) {
      if (part.find(t) != std::u32string::npos) return true;
    }
  }
  return false;
}

std::vector<std::u32string> folded(const std::vector<std::string>& parts) {
  std::vector<std::u32string> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(text::fold(text::decode(p)));
  return out;
}

}  // namespace

bool pnms_match(const TargetIdentity& target, std::string_view prediction) {
  return any_containment(folded(target.parts()), prediction);
}

bool lnms_match(const TargetIdentity& target, std::string_view prediction) {
  return any_containment(folded({target.last_name()}), prediction);
}

double min_nld(const TargetIdentity& target, std::span<const std::string> predictions) {
  if (predictions.empty()) {
    throw Error(ErrorCode::kEmptyPredictionSet, "no predictions to score against " +
                                                    target.full_name());
  }
  auto length = static_cast<double>(text::char_count(target.full_name()));
  std::size_t best = levenshtein(predictions.front(), target.full_name());
  for (const auto& p : predictions.subspan(1)) {
    best = std::min(best, levenshtein(p, target.full_name()));
  }
  return static_cast<double>(best) / length;
}

double min_nld(const TargetIdentity& target, const PredictionSet& predictions) {
  return min_nld(target, std::span<const std::string>(predictions.predictions()));
}

PerExampleScores score_example(const TargetIdentity& target, const PredictionSet& predictions) {
  PerExampleScores out;
  out.document_id = predictions.document_id();
  out.min_nld = min_nld(target, predictions);
  auto parts = folded(target.parts());
  auto last = folded({target.last_name()});
  for (const auto& p : predictions.predictions()) {
    out.pnms_hit = out.pnms_hit || any_containment(parts, p);
    out.lnms_hit = out.lnms_hit || any_containment(last, p);
  }
  return out;
}

double weighted_pnms(double pnms, double lnms, double alpha) {
  return alpha * pnms + (1.0 - alpha) * lnms;
}

MetricScores aggregate(std::span<const PerExampleScores> examples, double alpha) {
  if (examples.empty()) throw Error(ErrorCode::kEmptyCorpus, "no examples to aggregate");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  }
  std::size_t pnms_hits = 0;
  std::size_t lnms_hits = 0;
  double nld_sum = 0.0;
  for (const auto& e : examples) {
    pnms_hits += e.pnms_hit ? 1 : 0;
    lnms_hits += e.lnms_hit ? 1 : 0;
    nld_sum += e.min_nld;
  }
  auto n = static_cast<double>(examples.size());
  MetricScores out;
  out.pnms = static_cast<double>(pnms_hits) / n;
  out.lnms = static_cast<double>(lnms_hits) / n;
  out.nld = nld_sum / n;
  out.alpha = alpha;
  out.w_pnms = weighted_pnms(out.pnms, out.lnms, alpha);
  out.example_count = examples.size();
  return out;
}

}  // namespace reident::metrics
