// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Evaluation runs over a masked corpus: truncate, predict, score,
// categorize, aggregate. Sweeps are lists of runs rendered as CSV matrices.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "reident/backends.hpp"
#include "reident/categorizer.hpp"
#include "reident/error.hpp"
#include "reident/metrics.hpp"
#include "reident/model.hpp"
#include "reident/registry.hpp"

namespace reident::harness {

enum class TextVariant { kOriginal, kParaphrased };

std::string_view to_string(TextVariant v) noexcept;
TextVariant parse_text_variant(std::string_view s);

/// Keep the first `chars` characters (never splitting a mask token).
struct CharLimit {
  std::size_t chars = 1000;
  friend bool operator==(const CharLimit&, const CharLimit&) = default;
};

/// Keep the first `sentences` sentences.
struct SentenceCap {
  std::size_t sentences = 8;
  friend bool operator==(const SentenceCap&, const SentenceCap&) = default;
};

using Truncation = std::variant<CharLimit, SentenceCap>;

std::string to_string(const Truncation& t);
/// "chars:<n>" or "sentences:<n>".
Truncation parse_truncation(std::string_view s);

/// Character limit used when a run does not set one: 10000 for rulings,
/// 1000 otherwise.
std::size_t default_max_chars(DocumentKind kind) noexcept;

struct RunConfig {
  /// Row name in sweep outputs; derived from the other fields when empty.
  std::string label;
  std::string backend;
  std::string template_id = "instruct";
  /// Unset means a per-document CharLimit from default_max_chars.
  std::optional<Truncation> truncation;
  std::size_t top_n = 5;
  TextVariant text_variant = TextVariant::kOriginal;
  /// Overrides the backend's registered decoding when set.
  std::optional<DecodingSpec> decoding;
  std::uint64_t seed = 0;

  std::string display_label() const;
  /// Throws InvalidArgument for top_n 0 or a zero-sized truncation.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

struct RunOptions {
  std::size_t jobs = 1;
  /// The run aborts with RunAborted when more than this fraction fails.
  double max_failure_ratio = 0.5;
  double alpha = kDefaultAlpha;
  RetryPolicy retry;
  /// Defaults to the bundled gazetteer.
  const categorizer::NameGazetteer* gazetteer = nullptr;
  /// Keep rendered prompts in the per-document audit records.
  bool keep_prompts = false;
};

struct PredictionRecord {
  std::string document_id;
  std::vector<std::string> predictions;
  std::vector<categorizer::Category> categories;
  std::string raw_response;
  std::string prompt;
  std::size_t visible_chars = 0;
};

struct FailureRecord {
  std::string document_id;
  ErrorCode code;
  std::string message;
};

struct SkipRecord {
  std::string document_id;
  std::string reason;
};

struct EvaluationReport {
  RunConfig config;
  std::string backend_id;
  DecodingSpec decoding;
  /// Unset when no scored example exists.
  std::optional<MetricScores> scores;
  std::vector<metrics::PerExampleScores> per_example;
  std::vector<PredictionRecord> predictions;
  categorizer::Histogram category_histogram = categorizer::empty_histogram();
  std::vector<FailureRecord> failures;
  std::vector<SkipRecord> skipped;
  /// Predicted but not scored because the document has no target.
  std::size_t unlabeled = 0;
  std::size_t corpus_size = 0;
  std::chrono::milliseconds wall_time{0};
};

/// Documents whose truncated text holds no mask token, and paraphrased runs
/// over documents without a paraphrase, are skipped. Per-document errors are
/// recorded; the run continues unless the failure ratio is exceeded.
/// Postcondition: per_example + failures + skipped + unlabeled = corpus_size.
EvaluationReport run(const RunConfig& config, const std::vector<MaskedDocument>& corpus,
                     const BackendRegistry& registry, const RunOptions& options = {});

struct SweepRow {
  RunConfig config;
  std::optional<EvaluationReport> report;
  /// Set when the run raised instead of producing a report.
  std::optional<std::string> error;
};

std::vector<SweepRow> sweep(const std::vector<RunConfig>& configs,
                            const std::vector<MaskedDocument>& corpus,
                            const BackendRegistry& registry, const RunOptions& options = {});

/// Full report. Wall time is excluded so reruns compare byte-identical; it
/// lives in the manifest.
nlohmann::json to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::json& j);

/// One header plus one row per report (or failed run).
void write_scores_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_scores_csv(std::ostream& out, const EvaluationReport& report);

std::string render_markdown(const EvaluationReport& report);

/// One JSON line per predicted document: id, prompt, raw response, parsed
/// candidates. Prompts are present only for runs with keep_prompts.
std::string audit_jsonl(const EvaluationReport& report);

std::string hash_hex(std::uint64_t h);
std::uint64_t corpus_hash(const std::vector<MaskedDocument>& corpus);

/// Provenance for a set of reports.
nlohmann::json manifest(const std::vector<const EvaluationReport*>& reports,
                        const std::vector<MaskedDocument>& corpus);

}  // namespace reident::harness
