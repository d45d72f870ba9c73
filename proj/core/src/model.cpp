// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/model.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "reident/error.hpp"
#include "reident/text.hpp"

namespace reident {

TargetIdentity normalize_name(std::string_view raw) {
  auto parts = text::split_whitespace(raw);
  if (parts.empty()) throw Error(ErrorCode::kEmptyName, "name is empty after trimming");
  auto full = text::join(parts, " ");
  return TargetIdentity(std::move(full), std::move(parts));
}

std::string_view to_string(DocumentKind kind) noexcept {
  switch (kind) {
    case DocumentKind::kWikipedia: return "wikipedia";
    case DocumentKind::kRuling: return "ruling";
    case DocumentKind::kOther: return "other";
  }
  return "other";
}

DocumentKind parse_document_kind(std::string_view s) {
  if (s == "wikipedia") return DocumentKind::kWikipedia;
  if (s == "ruling") return DocumentKind::kRuling;
  if (s == "other" || s.empty()) return DocumentKind::kOther;
  throw Error(ErrorCode::kInvalidArgument, "unknown document kind '" + std::string(s) + "'");
}

MaskedDocument::MaskedDocument(Init init) : init_(std::move(init)) {
  if (init_.mask_token.empty()) {
    throw Error(ErrorCode::kInvariantViolation, "document " + init_.id + ": empty mask token");
  }
  if (init_.masked_text.find(init_.mask_token) == std::string::npos) {
    throw Error(ErrorCode::kInvariantViolation,
                "document " + init_.id + ": masked_text has no '" + init_.mask_token + "'");
  }
  if (init_.target) {
    const auto& name = init_.target->full_name();
    if (text::contains_ci(init_.masked_text, name)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "document " + init_.id + ": masked_text leaks the target name");
    }
    if (init_.paraphrased_text && text::contains_ci(*init_.paraphrased_text, name)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "document " + init_.id + ": paraphrased_text leaks the target name");
    }
  }
}

DecodingSpec::DecodingSpec(Strategy strategy, double temperature)
    : strategy_(strategy), temperature_(temperature) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be a non-negative number");
  }
  if (auto* b = std::get_if<Beam>(&strategy_); b && b->width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "beam width must be >= 1");
  }
  if (auto* k = std::get_if<TopK>(&strategy_); k && k->k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");
  }
  if (auto* p = std::get_if<TopP>(&strategy_); p && !(p->p > 0.0 && p->p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "top_p must lie in (0, 1]");
  }
}

namespace {

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad " + std::string(what) + " value '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

DecodingSpec DecodingSpec::parse(std::string_view strategy, double temperature) {
  auto colon = strategy.find(':');
  auto name = strategy.substr(0, colon);
  auto arg = colon == std::string_view::npos ? std::string_view{} : strategy.substr(colon + 1);
  if (name == "greedy") return DecodingSpec(Greedy{}, temperature);
  if (name == "beam") {
    return DecodingSpec(Beam{arg.empty() ? 5 : parse_number<std::size_t>(arg, "beam")}, temperature);
  }
  if (name == "top_k") {
    return DecodingSpec(TopK{arg.empty() ? 50 : parse_number<std::size_t>(arg, "top_k")},
                        temperature);
  }
  if (name == "top_p") {
    return DecodingSpec(TopP{arg.empty() ? 0.9 : parse_number<double>(arg, "top_p")}, temperature);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown decoding strategy '" + std::string(strategy) + "'");
}

std::string DecodingSpec::to_string() const {
  std::ostringstream out;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Greedy>) out << "greedy";
        if constexpr (std::is_same_v<S, Beam>) out << "beam:" << s.width;
        if constexpr (std::is_same_v<S, TopK>) out << "top_k:" << s.k;
        if constexpr (std::is_same_v<S, TopP>) out << "top_p:" << s.p;
      },
      strategy_);
  return out.str();
}

PredictionSet::PredictionSet(std::string document_id, std::vector<std::string> predictions,
                             std::size_t n, std::string backend_id, DecodingSpec decoding)
    : document_id_(std::move(document_id)),
      predictions_(std::move(predictions)),
      n_(n),
      backend_id_(std::move(backend_id)),
      decoding_(decoding) {
  if (n_ == 0) throw Error(ErrorCode::kInvalidArgument, "prediction set size n must be >= 1");
  if (predictions_.size() > n_) {
    throw Error(ErrorCode::kInvalidArgument,
                "prediction set holds " + std::to_string(predictions_.size()) + " > n=" +
                    std::to_string(n_) + " candidates");
  }
}

}  // namespace reident
