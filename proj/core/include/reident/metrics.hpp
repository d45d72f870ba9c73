// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Name-matching scores for re-identification attempts.
//
//  * PNMS   - any part of the target name matches any of the n predictions.
//  * LNMS   - the same test restricted to the last name.
//  * NLD    - best edit distance of the n predictions to the full name,
//             divided by the length of the full name.
//  * W-PNMS - alpha * PNMS + (1 - alpha) * LNMS.
//
// Matching is case-insensitive substring containment in both directions.
// A prediction token only counts as "inside" a name part when it has at
// least kMinReverseTokenChars characters, so initials and stray letters do
// not score.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reident/model.hpp"

namespace reident::metrics {

inline constexpr std::size_t kMinReverseTokenChars = 3;

/// Unit-cost edit distance over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);

bool pnms_match(const TargetIdentity& target, std::string_view prediction);
bool lnms_match(const TargetIdentity& target, std::string_view prediction);

/// Throws EmptyPredictionSet when `predictions` is empty.
double min_nld(const TargetIdentity& target, std::span<const std::string> predictions);
double min_nld(const TargetIdentity& target, const PredictionSet& predictions);

struct PerExampleScores {
  std::string document_id;
  bool pnms_hit = false;
  bool lnms_hit = false;
  double min_nld = 0.0;

  friend bool operator==(const PerExampleScores&, const PerExampleScores&) = default;
};

PerExampleScores score_example(const TargetIdentity& target, const PredictionSet& predictions);

double weighted_pnms(double pnms, double lnms, double alpha = kDefaultAlpha);

/// Means over all examples; NLD includes examples that missed on PNMS.
/// Throws EmptyCorpus, or InvalidArgument for alpha outside [0, 1].
MetricScores aggregate(std::span<const PerExampleScores> examples, double alpha = kDefaultAlpha);

}  // namespace reident::metrics
