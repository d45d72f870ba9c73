// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/categorizer.hpp"

#include <algorithm>

#include "reident/baselines.hpp"
#include "reident/builtin_data.hpp"
#include "reident/error.hpp"
#include "reident/text.hpp"

namespace reident::categorizer {

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::kGood: return "good";
    case Category::kInText: return "in_text";
    case Category::kMaskToken: return "mask_token";
    case Category::kShortLetters: return "short_letters";
    case Category::kEmpty: return "empty";
    case Category::kNonName: return "non_name";
  }
  return "non_name";
}

Category parse_category(std::string_view s) {
  for (auto c : kAllCategories) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::kParseError, "unknown category '" + std::string(s) + "'");
}

NameGazetteer::NameGazetteer(const std::vector<std::string>& entries) {
  for (const auto& e : entries) {
    auto t = text::trim(e);
    if (!t.empty()) entries_.insert(text::lower(t));
  }
  if (entries_.empty()) throw Error(ErrorCode::kInvalidArgument, "gazetteer is empty");
}

NameGazetteer NameGazetteer::builtin() {
  return NameGazetteer(baselines::parse_lines(builtin::gazetteer()));
}

NameGazetteer NameGazetteer::load(const std::string& path) {
  return NameGazetteer(baselines::read_lines(path));
}

bool NameGazetteer::contains(std::string_view token) const {
  return entries_.find(text::lower(token)) != entries_.end();
}

bool is_short_letters(std::string_view prediction) {
  auto chars = text::decode(text::trim(prediction));
  std::size_t letters = 0;
  std::size_t i = 0;
  while (i < chars.size()) {
    if (!text::is_letter(chars[i])) return false;
    ++letters;
    ++i;
    while (i < chars.size() && (chars[i] == '.' || chars[i] == '_')) ++i;
    while (i < chars.size() && text::is_space(chars[i])) ++i;
  }
  return letters >= 1 && letters <= 2;
}

namespace {

std::string strip_token(std::string_view token) {
  auto chars = text::decode(token);
  std::size_t b = 0;
  std::size_t e = chars.size();
  while (b < e && !text::is_letter(chars[b])) ++b;
  while (e > b && !text::is_letter(chars[e - 1])) --e;
  return text::encode(std::u32string_view(chars).substr(b, e - b));
}

}  // namespace

Category categorize(std::string_view prediction, std::string_view source_text,
                    std::string_view mask_token, const NameGazetteer& gazetteer) {
  auto trimmed = text::trim(prediction);
  if (trimmed.empty()) return Category::kEmpty;
  if (trimmed == text::trim(mask_token)) return Category::kMaskToken;
  if (is_short_letters(trimmed)) return Category::kShortLetters;
  if (text::contains_ci(source_text, trimmed)) return Category::kInText;
  for (const auto& token : text::split_whitespace(trimmed)) {
    auto word = strip_token(token);
    if (!word.empty() && gazetteer.contains(word)) return Category::kGood;
  }
  return Category::kNonName;
}

Histogram empty_histogram() {
  Histogram h;
  for (auto c : kAllCategories) h[c] = 0;
  return h;
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram) {
  out << "category,count\n";
  for (auto c : kAllCategories) {
    auto it = histogram.find(c);
    out << to_string(c) << ',' << (it == histogram.end() ? 0 : it->second) << '\n';
  }
}

}  // namespace reident::categorizer
