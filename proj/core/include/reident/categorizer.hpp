// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace reident::categorizer {

/// Outcome classes for a raw prediction. Only kGood can be a
/// re-identification; everything else is noise of a particular kind.
enum class Category { kGood, kInText, kMaskToken, kShortLetters, kEmpty, kNonName };

inline constexpr std::array<Category, 6> kAllCategories = {
    Category::kGood,         Category::kInText, Category::kMaskToken,
    Category::kShortLetters, Category::kEmpty,  Category::kNonName};

std::string_view to_string(Category c) noexcept;
/// Throws ParseError.
Category parse_category(std::string_view s);

class NameGazetteer {
 public:
  /// Lowercases entries. Throws InvalidArgument when empty.
  explicit NameGazetteer(const std::vector<std::string>& entries);

  static NameGazetteer builtin();
  static NameGazetteer load(const std::string& path);

  bool contains(std::string_view token) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::set<std::string, std::less<>> entries_;
};

/// Precedence: empty > mask_token > short_letters > in_text > good > non_name.
Category categorize(std::string_view prediction, std::string_view source_text,
                    std::string_view mask_token, const NameGazetteer& gazetteer);

/// One to two letters, each optionally followed by dots/underscores and
/// whitespace ("X.__", "A. B.").
bool is_short_letters(std::string_view prediction);

using Histogram = std::map<Category, std::size_t>;

/// Histogram with every category present (zero counts included).
Histogram empty_histogram();

void write_histogram_csv(std::ostream& out, const Histogram& histogram);

}  // namespace reident::categorizer
