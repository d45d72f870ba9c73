// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "reident/error.hpp"
#include "reident/text.hpp"

namespace reident::io {

using nlohmann::json;

json to_json(const MaskedDocument& doc) {
  json j;
  j["id"] = doc.id();
  j["masked_text"] = doc.masked_text();
  j["mask_token"] = doc.mask_token();
  if (doc.target()) j["target"] = doc.target()->full_name();
  if (doc.original_text()) j["original_text"] = *doc.original_text();
  if (doc.paraphrased_text()) j["paraphrased_text"] = *doc.paraphrased_text();
  j["kind"] = to_string(doc.kind());
  return j;
}

namespace {

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

template <typename F>
auto for_each_line(std::string_view contents, F&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < contents.size()) {
    auto nl = contents.find('\n', start);
    auto line = contents.substr(start, nl == std::string_view::npos ? nl : nl - start);
    start = nl == std::string_view::npos ? contents.size() : nl + 1;
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw CorpusError(ErrorCode::kParseError, line_no, e.what());
    }
    if (!j.is_object()) throw CorpusError(ErrorCode::kParseError, line_no, "record is not an object");
    try {
      fn(j, line_no);
    } catch (const CorpusError&) {
      throw;
    } catch (const Error& e) {
      throw CorpusError(e.code(), line_no, e.message());
    } catch (const json::exception& e) {
      throw CorpusError(ErrorCode::kParseError, line_no, e.what());
    }
  }
}

}  // namespace

MaskedDocument document_from_json(const json& j) {
  try {
    MaskedDocument::Init init;
    init.id = j.at("id").get<std::string>();
    init.masked_text = j.at("masked_text").get<std::string>();
    init.mask_token = j.value("mask_token", std::string(kDefaultMaskToken));
    if (auto t = optional_string(j, "target")) init.target = normalize_name(*t);
    init.original_text = optional_string(j, "original_text");
    init.paraphrased_text = optional_string(j, "paraphrased_text");
    init.kind = parse_document_kind(j.value("kind", "other"));
    return MaskedDocument(std::move(init));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

json to_json(const masking::MaskingReport& report) {
  json j;
  j["masked_count"] = report.masked_count;
  j["dropped"] = report.dropped;
  j["drop_reason"] = report.drop_reason ? json(to_string(*report.drop_reason)) : json(nullptr);
  return j;
}

std::vector<MaskedDocument> parse_corpus(std::string_view contents) {
  std::vector<MaskedDocument> docs;
  std::set<std::string, std::less<>> seen;
  for_each_line(contents, [&](const json& j, std::size_t) {
    auto doc = document_from_json(j);
    if (!seen.insert(doc.id()).second) {
      throw Error(ErrorCode::kInvariantViolation, "duplicate document id '" + doc.id() + "'");
    }
    docs.push_back(std::move(doc));
  });
  return docs;
}

std::vector<MaskedDocument> load_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_file(path));
}

std::vector<masking::RawPage> load_raw_pages(const std::filesystem::path& path) {
  std::vector<masking::RawPage> pages;
  for_each_line(read_file(path), [&](const json& j, std::size_t) {
    masking::RawPage page;
    page.id = j.at("id").get<std::string>();
    page.title = j.at("title").get<std::string>();
    page.text = j.at("text").get<std::string>();
    for (const auto& s : j.value("spans", json::array())) {
      masking::EntitySpan span;
      span.start = s.at("start").get<std::size_t>();
      span.end = s.at("end").get<std::size_t>();
      span.surface = s.at("surface").get<std::string>();
      auto label = s.value("label", "PERSON");
      span.label = (label == "PERSON" || label == "PER" || label == "person")
                       ? masking::EntityLabel::kPerson
                       : masking::EntityLabel::kOther;
      page.spans.push_back(std::move(span));
    }
    page.kind = parse_document_kind(j.value("kind", "wikipedia"));
    pages.push_back(std::move(page));
  });
  return pages;
}

std::vector<Article> load_articles(const std::filesystem::path& path) {
  std::vector<Article> out;
  for_each_line(read_file(path), [&](const json& j, std::size_t) {
    out.push_back({j.at("article_id").get<std::string>(), j.at("text").get<std::string>()});
  });
  return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<MaskedDocument>& docs) {
  std::string out;
  for (const auto& d : docs) {
    out += to_json(d).dump();
    out += '\n';
  }
  write_file(path, out);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename onto " + path.string() + ": " + ec.message());
}

}  // namespace reident::io
