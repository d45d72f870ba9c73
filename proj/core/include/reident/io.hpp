// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// JSONL corpora and JSON encodings of the domain types.
//
// MaskedDocument line:
//   {"id", "masked_text", "mask_token"?, "target"?, "original_text"?,
//    "paraphrased_text"?, "kind"?}
// Raw page line (masking input):
//   {"id", "title", "text", "spans": [{"start","end","surface","label"?}], "kind"?}
// Article line (retrieval input): {"article_id", "text"}

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reident/masking.hpp"
#include "reident/model.hpp"

namespace reident::io {

nlohmann::json to_json(const MaskedDocument& doc);
/// Throws InvariantViolation or ParseError (without line information).
MaskedDocument document_from_json(const nlohmann::json& j);

nlohmann::json to_json(const masking::MaskingReport& report);

/// Reads a MaskedDocument JSONL file. Blank lines are ignored. Throws
/// CorpusError carrying the 1-based line for ParseError, InvariantViolation
/// (including duplicate ids) and Io for unreadable files.
std::vector<MaskedDocument> load_corpus(const std::filesystem::path& path);
std::vector<MaskedDocument> parse_corpus(std::string_view contents);

std::vector<masking::RawPage> load_raw_pages(const std::filesystem::path& path);

struct Article {
  std::string article_id;
  std::string text;
};

std::vector<Article> load_articles(const std::filesystem::path& path);

void write_jsonl(const std::filesystem::path& path, const std::vector<MaskedDocument>& docs);

std::string read_file(const std::filesystem::path& path);
/// Writes via a sibling temporary file and rename.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace reident::io
