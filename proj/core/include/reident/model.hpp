// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Domain types shared across the toolkit. Everything here is immutable once
// constructed, so instances can be shared freely between worker threads.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reident {

inline constexpr std::string_view kDefaultMaskToken = "<mask>";

/// A ground-truth person name split into whitespace-separated parts.
class TargetIdentity {
 public:
  const std::string& full_name() const noexcept { return full_name_; }
  const std::vector<std::string>& parts() const noexcept { return parts_; }
  const std::string& last_name() const noexcept { return parts_.back(); }

  friend bool operator==(const TargetIdentity&, const TargetIdentity&) = default;

 private:
  friend TargetIdentity normalize_name(std::string_view raw);
  TargetIdentity(std::string full_name, std::vector<std::string> parts)
      : full_name_(std::move(full_name)), parts_(std::move(parts)) {}

  std::string full_name_;
  std::vector<std::string> parts_;
};

/// Collapses whitespace runs and splits on them. Hyphens, apostrophes and
/// initials ("J.") stay inside their token. Throws EmptyName.
TargetIdentity normalize_name(std::string_view raw);

enum class DocumentKind { kWikipedia, kRuling, kOther };

std::string_view to_string(DocumentKind kind) noexcept;
DocumentKind parse_document_kind(std::string_view s);

class MaskedDocument {
 public:
  struct Init {
    std::string id;
    std::string masked_text;
    std::string mask_token{kDefaultMaskToken};
    std::optional<TargetIdentity> target;
    std::optional<std::string> original_text;
    std::optional<std::string> paraphrased_text;
    DocumentKind kind = DocumentKind::kOther;
  };

  /// Throws InvariantViolation when the text lacks a mask token or still
  /// contains the target's full name.
  explicit MaskedDocument(Init init);

  const std::string& id() const noexcept { return init_.id; }
  const std::string& masked_text() const noexcept { return init_.masked_text; }
  const std::string& mask_token() const noexcept { return init_.mask_token; }
  const std::optional<TargetIdentity>& target() const noexcept { return init_.target; }
  const std::optional<std::string>& original_text() const noexcept { return init_.original_text; }
  const std::optional<std::string>& paraphrased_text() const noexcept {
    return init_.paraphrased_text;
  }
  DocumentKind kind() const noexcept { return init_.kind; }

 private:
  Init init_;
};

/// Decoding parameters forwarded to a backend.
struct Greedy {
  friend bool operator==(const Greedy&, const Greedy&) = default;
};
struct Beam {
  std::size_t width = 5;
  friend bool operator==(const Beam&, const Beam&) = default;
};
struct TopK {
  std::size_t k = 50;
  friend bool operator==(const TopK&, const TopK&) = default;
};
struct TopP {
  double p = 0.9;
  friend bool operator==(const TopP&, const TopP&) = default;
};

class DecodingSpec {
 public:
  using Strategy = std::variant<Greedy, Beam, TopK, TopP>;

  DecodingSpec() = default;
  /// Throws InvalidArgument for beam width 0, k 0, p outside (0,1] or a
  /// negative temperature.
  DecodingSpec(Strategy strategy, double temperature);

  /// "greedy", "beam:<width>", "top_k:<k>" or "top_p:<p>".
  static DecodingSpec parse(std::string_view strategy, double temperature = 1.0);

  const Strategy& strategy() const noexcept { return strategy_; }
  double temperature() const noexcept { return temperature_; }
  bool is_greedy() const noexcept { return std::holds_alternative<Greedy>(strategy_); }

  /// Number of candidates to request for a top_n run; greedy is always 1.
  std::size_t candidates(std::size_t top_n) const noexcept { return is_greedy() ? 1 : top_n; }

  std::string to_string() const;

  friend bool operator==(const DecodingSpec&, const DecodingSpec&) = default;

 private:
  Strategy strategy_ = Beam{5};
  double temperature_ = 1.0;
};

class PredictionSet {
 public:
  /// Throws InvalidArgument if n is 0 or more than n predictions are given.
  PredictionSet(std::string document_id, std::vector<std::string> predictions, std::size_t n,
                std::string backend_id, DecodingSpec decoding);

  const std::string& document_id() const noexcept { return document_id_; }
  const std::vector<std::string>& predictions() const noexcept { return predictions_; }
  std::size_t n() const noexcept { return n_; }
  const std::string& backend_id() const noexcept { return backend_id_; }
  const DecodingSpec& decoding() const noexcept { return decoding_; }
  bool empty() const noexcept { return predictions_.empty(); }
  std::size_t size() const noexcept { return predictions_.size(); }

 private:
  std::string document_id_;
  std::vector<std::string> predictions_;
  std::size_t n_;
  std::string backend_id_;
  DecodingSpec decoding_;
};

inline constexpr double kDefaultAlpha = 0.35;

struct MetricScores {
  double pnms = 0.0;
  double lnms = 0.0;
  double nld = 0.0;
  double w_pnms = 0.0;
  double alpha = kDefaultAlpha;
  std::size_t example_count = 0;
};

}  // namespace reident
