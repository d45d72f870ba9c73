// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/harness.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "reident/io.hpp"
#include "reident/masking.hpp"
#include "reident/parallel.hpp"
#include "reident/text.hpp"
#include "reident/version.hpp"

namespace reident::harness {

using nlohmann::json;

std::string_view to_string(TextVariant v) noexcept {
  return v == TextVariant::kParaphrased ? "paraphrased" : "original";
}

TextVariant parse_text_variant(std::string_view s) {
  if (s == "original") return TextVariant::kOriginal;
  if (s == "paraphrased") return TextVariant::kParaphrased;
  throw Error(ErrorCode::kInvalidArgument, "unknown text variant '" + std::string(s) + "'");
}

std::string to_string(const Truncation& t) {
  if (const auto* c = std::get_if<CharLimit>(&t)) return "chars:" + std::to_string(c->chars);
  return "sentences:" + std::to_string(std::get<SentenceCap>(t).sentences);
}

Truncation parse_truncation(std::string_view s) {
  auto colon = s.find(':');
  auto kind = s.substr(0, colon);
  std::size_t value = 0;
  try {
    if (colon == std::string_view::npos) throw std::invalid_argument("missing count");
    std::size_t used = 0;
    auto digits = std::string(s.substr(colon + 1));
    value = std::stoull(digits, &used);
    if (used != digits.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidArgument, "bad truncation '" + std::string(s) + "'");
  }
  if (kind == "chars") return CharLimit{value};
  if (kind == "sentences") return SentenceCap{value};
  throw Error(ErrorCode::kInvalidArgument, "bad truncation '" + std::string(s) + "'");
}

std::size_t default_max_chars(DocumentKind kind) noexcept {
  return kind == DocumentKind::kRuling ? 10000 : 1000;
}

std::string RunConfig::display_label() const {
  if (!label.empty()) return label;
  std::string out = backend + "/" + template_id + "/" +
                    (truncation ? to_string(*truncation) : std::string("chars:auto")) + "/top" +
                    std::to_string(top_n) + "/" + std::string(to_string(text_variant));
  if (decoding) out += "/" + decoding->to_string();
  return out;
}

void RunConfig::validate() const {
  if (backend.empty()) throw Error(ErrorCode::kInvalidArgument, "run config has no backend");
  if (top_n < 1) throw Error(ErrorCode::kInvalidArgument, "top_n must be >= 1");
  if (truncation) {
    bool zero = std::visit([](const auto& t) {
      using T = std::decay_t<decltype(t)>;
      if constexpr (std::is_same_v<T, CharLimit>) return t.chars == 0;
      else return t.sentences == 0;
    }, *truncation);
    if (zero) throw Error(ErrorCode::kInvalidArgument, "truncation must keep at least one unit");
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["label"] = c.display_label();
  j["backend"] = c.backend;
  j["template"] = c.template_id;
  j["truncation"] = c.truncation ? json(to_string(*c.truncation)) : json(nullptr);
  j["top_n"] = c.top_n;
  j["text_variant"] = to_string(c.text_variant);
  if (c.decoding) {
    j["decoding"] = c.decoding->to_string();
    j["temperature"] = c.decoding->temperature();
  } else {
    j["decoding"] = nullptr;
  }
  j["seed"] = c.seed;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  try {
    RunConfig c;
    c.label = j.value("label", "");
    c.backend = j.at("backend").get<std::string>();
    c.template_id = j.value("template", "instruct");
    if (auto it = j.find("truncation"); it != j.end() && !it->is_null()) {
      c.truncation = parse_truncation(it->get<std::string>());
    }
    c.top_n = j.value("top_n", std::size_t{5});
    c.text_variant = parse_text_variant(j.value("text_variant", "original"));
    if (auto it = j.find("decoding"); it != j.end() && !it->is_null()) {
      c.decoding = DecodingSpec::parse(it->get<std::string>(), j.value("temperature", 1.0));
    }
    c.seed = j.value("seed", std::uint64_t{0});
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("run config: ") + e.what());
  }
}

namespace {

bool has_token(std::string_view text, std::string_view token) {
  return text.find(token) != std::string_view::npos;
}

std::string cap_sentences(std::string_view text, std::size_t count) {
  auto sentences = masking::split_sentences(text);
  if (sentences.size() > count) sentences.resize(count);
  return text::join(sentences, " ");
}

// Outcome of one document; exactly one alternative is filled.
struct Slot {
  std::optional<PredictionRecord> record;
  std::optional<metrics::PerExampleScores> scores;
  std::optional<FailureRecord> failure;
  std::optional<SkipRecord> skip;
};

}  // namespace

EvaluationReport run(const RunConfig& config, const std::vector<MaskedDocument>& corpus,
                     const BackendRegistry& registry, const RunOptions& options) {
  config.validate();
  if (options.max_failure_ratio < 0.0 || options.max_failure_ratio > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "max_failure_ratio must lie in [0, 1]");
  }
  const auto started = std::chrono::steady_clock::now();
  const auto& registered = registry.backend(config.backend);
  const auto& prompt = registry.prompt(config.template_id);
  BackendSpec spec = registered.spec;
  spec.top_n = config.top_n;
  if (config.decoding) spec.decoding = *config.decoding;
  if (config.truncation) {
    if (const auto* c = std::get_if<CharLimit>(&*config.truncation)) spec.max_input_chars = c->chars;
  }
  static const auto builtin_gazetteer = categorizer::NameGazetteer::builtin();
  const auto& gazetteer = options.gazetteer ? *options.gazetteer : builtin_gazetteer;

  std::vector<Slot> slots(corpus.size());
  auto process = [&](std::size_t i) {
    const auto& doc = corpus[i];
    auto& slot = slots[i];
    try {
      const std::string* source = &doc.masked_text();
      if (config.text_variant == TextVariant::kParaphrased) {
        if (!doc.paraphrased_text()) {
          slot.skip = SkipRecord{doc.id(), "no_paraphrase"};
          return;
        }
        source = &*doc.paraphrased_text();
      }
      std::string visible;
      if (config.truncation && std::holds_alternative<SentenceCap>(*config.truncation)) {
        visible = cap_sentences(*source, std::get<SentenceCap>(*config.truncation).sentences);
      } else {
        auto limit = config.truncation ? std::get<CharLimit>(*config.truncation).chars
                                       : default_max_chars(doc.kind());
        visible = truncate_input(*source, limit, doc.mask_token());
      }
      if (!has_token(visible, doc.mask_token())) {
        slot.skip = SkipRecord{doc.id(), "no_mask_in_window"};
        return;
      }
      auto prediction = predict_traced(*registered.backend, spec, prompt, doc, visible,
                                       options.retry, config.seed);
      PredictionRecord record;
      record.document_id = doc.id();
      record.predictions = prediction.set.predictions();
      for (const auto& p : record.predictions) {
        record.categories.push_back(categorizer::categorize(p, visible, doc.mask_token(), gazetteer));
      }
      record.raw_response = std::move(prediction.raw_response);
      if (options.keep_prompts) record.prompt = std::move(prediction.prompt);
      record.visible_chars = text::char_count(visible);
      if (doc.target()) {
        if (prediction.set.empty()) {
          throw Error(ErrorCode::kEmptyPredictionSet, "backend returned no predictions");
        }
        slot.scores = metrics::score_example(*doc.target(), prediction.set);
      }
      slot.record = std::move(record);
    } catch (const Error& e) {
      slot = Slot{};
      slot.failure = FailureRecord{doc.id(), e.code(), e.message()};
    } catch (const std::exception& e) {
      slot = Slot{};
      slot.failure = FailureRecord{doc.id(), ErrorCode::kInvalidArgument, e.what()};
    }
  };
  parallel_for(corpus.size(), std::min(std::max<std::size_t>(options.jobs, 1), spec.parallelism),
               process);

  EvaluationReport report;
  report.config = config;
  report.backend_id = spec.id;
  report.decoding = spec.decoding;
  report.corpus_size = corpus.size();
  for (auto& slot : slots) {
    if (slot.failure) {
      report.failures.push_back(std::move(*slot.failure));
      continue;
    }
    if (slot.skip) {
      report.skipped.push_back(std::move(*slot.skip));
      continue;
    }
    for (auto c : slot.record->categories) ++report.category_histogram[c];
    if (slot.scores) {
      report.per_example.push_back(std::move(*slot.scores));
    } else {
      ++report.unlabeled;
    }
    report.predictions.push_back(std::move(*slot.record));
  }
  if (!corpus.empty() && static_cast<double>(report.failures.size()) >
                             options.max_failure_ratio * static_cast<double>(corpus.size())) {
    const auto& first = report.failures.front();
    throw Error(ErrorCode::kRunAborted,
                std::to_string(report.failures.size()) + " of " + std::to_string(corpus.size()) +
                    " documents failed; first: " + first.document_id + ": " +
                    std::string(reident::to_string(first.code)) + ": " + first.message);
  }
  if (!report.per_example.empty()) report.scores = metrics::aggregate(report.per_example, options.alpha);
  report.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  return report;
}

std::vector<SweepRow> sweep(const std::vector<RunConfig>& configs,
                            const std::vector<MaskedDocument>& corpus,
                            const BackendRegistry& registry, const RunOptions& options) {
  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  for (const auto& c : configs) {
    SweepRow row{c, std::nullopt, std::nullopt};
    try {
      row.report = run(c, corpus, registry, options);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

json scores_json(const MetricScores& s) {
  return json{{"pnms", s.pnms},   {"lnms", s.lnms},   {"nld", s.nld},
              {"w_pnms", s.w_pnms}, {"alpha", s.alpha}, {"example_count", s.example_count}};
}

MetricScores scores_from_json(const json& j) {
  MetricScores s;
  s.pnms = j.at("pnms").get<double>();
  s.lnms = j.at("lnms").get<double>();
  s.nld = j.at("nld").get<double>();
  s.w_pnms = j.at("w_pnms").get<double>();
  s.alpha = j.at("alpha").get<double>();
  s.example_count = j.at("example_count").get<std::size_t>();
  return s;
}

}  // namespace

json to_json(const EvaluationReport& r) {
  json j;
  j["toolkit_version"] = kVersion;
  j["config"] = to_json(r.config);
  j["backend_id"] = r.backend_id;
  j["decoding"] = r.decoding.to_string();
  j["temperature"] = r.decoding.temperature();
  j["corpus_size"] = r.corpus_size;
  j["scores"] = r.scores ? scores_json(*r.scores) : json(nullptr);
  j["per_example"] = json::array();
  for (const auto& e : r.per_example) {
    j["per_example"].push_back(json{{"document_id", e.document_id},
                                    {"pnms_hit", e.pnms_hit},
                                    {"lnms_hit", e.lnms_hit},
                                    {"min_nld", e.min_nld}});
  }
  j["predictions"] = json::array();
  for (const auto& p : r.predictions) {
    json cats = json::array();
    for (auto c : p.categories) cats.push_back(categorizer::to_string(c));
    json rec{{"document_id", p.document_id},
             {"predictions", p.predictions},
             {"categories", cats},
             {"raw_response", p.raw_response},
             {"visible_chars", p.visible_chars}};
    if (!p.prompt.empty()) rec["prompt"] = p.prompt;
    j["predictions"].push_back(std::move(rec));
  }
  json hist = json::object();
  for (auto c : categorizer::kAllCategories) {
    auto it = r.category_histogram.find(c);
    hist[std::string(categorizer::to_string(c))] = it == r.category_histogram.end() ? 0 : it->second;
  }
  j["category_histogram"] = hist;
  j["failures"] = json::array();
  for (const auto& f : r.failures) {
    j["failures"].push_back(
        json{{"document_id", f.document_id}, {"code", reident::to_string(f.code)}, {"message", f.message}});
  }
  j["skipped"] = json::array();
  for (const auto& s : r.skipped) {
    j["skipped"].push_back(json{{"document_id", s.document_id}, {"reason", s.reason}});
  }
  j["unlabeled"] = r.unlabeled;
  return j;
}

EvaluationReport report_from_json(const json& j) {
  try {
    EvaluationReport r;
    r.config = run_config_from_json(j.at("config"));
    r.backend_id = j.at("backend_id").get<std::string>();
    r.decoding = DecodingSpec::parse(j.at("decoding").get<std::string>(), j.value("temperature", 1.0));
    r.corpus_size = j.at("corpus_size").get<std::size_t>();
    if (!j.at("scores").is_null()) r.scores = scores_from_json(j.at("scores"));
    for (const auto& e : j.at("per_example")) {
      r.per_example.push_back(metrics::PerExampleScores{e.at("document_id").get<std::string>(),
                                               e.at("pnms_hit").get<bool>(),
                                               e.at("lnms_hit").get<bool>(),
                                               e.at("min_nld").get<double>()});
    }
    for (const auto& p : j.value("predictions", json::array())) {
      PredictionRecord rec;
      rec.document_id = p.at("document_id").get<std::string>();
      rec.predictions = p.at("predictions").get<std::vector<std::string>>();
      for (const auto& c : p.at("categories")) {
        rec.categories.push_back(categorizer::parse_category(c.get<std::string>()));
      }
      rec.raw_response = p.value("raw_response", "");
      rec.prompt = p.value("prompt", "");
      rec.visible_chars = p.value("visible_chars", std::size_t{0});
      r.predictions.push_back(std::move(rec));
    }
    for (const auto& [name, count] : j.at("category_histogram").items()) {
      r.category_histogram[categorizer::parse_category(name)] = count.get<std::size_t>();
    }
    for (const auto& f : j.at("failures")) {
      r.failures.push_back(FailureRecord{f.at("document_id").get<std::string>(),
                                         parse_error_code(f.at("code").get<std::string>()),
                                         f.at("message").get<std::string>()});
    }
    for (const auto& s : j.at("skipped")) {
      r.skipped.push_back(
          SkipRecord{s.at("document_id").get<std::string>(), s.at("reason").get<std::string>()});
    }
    r.unlabeled = j.at("unlabeled").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("report: ") + e.what());
  }
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

constexpr std::string_view kScoresHeader =
    "label,backend,template,truncation,top_n,text_variant,decoding,seed,example_count,pnms,lnms,"
    "nld,w_pnms,failures,skipped,unlabeled,error\n";

void write_row(std::ostream& out, const RunConfig& c, const EvaluationReport* r,
               const std::string& error) {
  out << csv_field(c.display_label()) << ',' << csv_field(c.backend) << ','
      << csv_field(c.template_id) << ','
      << (c.truncation ? to_string(*c.truncation) : std::string("chars:auto")) << ',' << c.top_n
      << ',' << to_string(c.text_variant) << ','
      << csv_field(r ? r->decoding.to_string() : (c.decoding ? c.decoding->to_string() : "")) << ','
      << c.seed << ',';
  if (r && r->scores) {
    const auto& s = *r->scores;
    out << s.example_count << ',' << fixed(s.pnms) << ',' << fixed(s.lnms) << ',' << fixed(s.nld)
        << ',' << fixed(s.w_pnms);
  } else {
    out << "0,,,,";
  }
  if (r) {
    out << ',' << r->failures.size() << ',' << r->skipped.size() << ',' << r->unlabeled << ",\n";
  } else {
    out << ",,," << csv_field(error) << '\n';
  }
}

}  // namespace

void write_scores_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kScoresHeader;
  for (const auto& row : rows) {
    write_row(out, row.config, row.report ? &*row.report : nullptr, row.error.value_or(""));
  }
}

void write_scores_csv(std::ostream& out, const EvaluationReport& report) {
  out << kScoresHeader;
  write_row(out, report.config, &report, "");
}

std::string render_markdown(const EvaluationReport& r) {
  std::ostringstream out;
  out << "# Evaluation report: " << r.config.display_label() << "\n\n";
  out << "| field | value |\n|---|---|\n";
  out << "| backend | " << r.backend_id << " |\n";
  out << "| template | " << r.config.template_id << " |\n";
  out << "| decoding | " << r.decoding.to_string() << " |\n";
  out << "| corpus size | " << r.corpus_size << " |\n";
  out << "| scored | " << r.per_example.size() << " |\n";
  out << "| unlabeled | " << r.unlabeled << " |\n";
  out << "| skipped | " << r.skipped.size() << " |\n";
  out << "| failures | " << r.failures.size() << " |\n\n";
  out << "## Scores\n\n";
  if (r.scores) {
    out << "| PNMS | LNMS | NLD | W-PNMS | alpha |\n|---|---|---|---|---|\n";
    out << "| " << fixed(r.scores->pnms) << " | " << fixed(r.scores->lnms) << " | "
        << fixed(r.scores->nld) << " | " << fixed(r.scores->w_pnms) << " | "
        << fixed(r.scores->alpha) << " |\n\n";
  } else {
    out << "No scored examples.\n\n";
  }
  out << "## Prediction categories\n\n| category | count |\n|---|---|\n";
  for (auto c : categorizer::kAllCategories) {
    auto it = r.category_histogram.find(c);
    out << "| " << categorizer::to_string(c) << " | "
        << (it == r.category_histogram.end() ? 0 : it->second) << " |\n";
  }
  if (!r.predictions.empty()) {
    out << "\n## Predictions\n\n| document | predictions |\n|---|---|\n";
    for (const auto& p : r.predictions) {
      std::string joined;
      for (std::size_t i = 0; i < p.predictions.size(); ++i) {
        if (i) joined += "; ";
        joined += p.predictions[i];
      }
      for (auto& ch : joined) {
        if (ch == '|' || ch == '\n') ch = ' ';
      }
      out << "| " << p.document_id << " | " << joined << " |\n";
    }
  }
  if (!r.failures.empty()) {
    out << "\n## Failures\n\n| document | code |\n|---|---|\n";
    for (const auto& f : r.failures) {
      out << "| " << f.document_id << " | " << reident::to_string(f.code) << " |\n";
    }
  }
  return out.str();
}

std::string audit_jsonl(const EvaluationReport& r) {
  std::string out;
  for (const auto& p : r.predictions) {
    out += json{{"document_id", p.document_id},
                {"backend_id", r.backend_id},
                {"prompt", p.prompt},
                {"raw_response", p.raw_response},
                {"predictions", p.predictions}}
               .dump();
    out += '\n';
  }
  return out;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::uint64_t corpus_hash(const std::vector<MaskedDocument>& corpus) {
  std::uint64_t h = text::fnv1a64("");
  for (const auto& d : corpus) {
    h = text::fnv1a64(io::to_json(d).dump(), h);
    h = text::fnv1a64("\n", h);
  }
  return h;
}

json manifest(const std::vector<const EvaluationReport*>& reports,
              const std::vector<MaskedDocument>& corpus) {
  json runs = json::array();
  for (const auto* r : reports) {
    runs.push_back(json{{"label", r->config.display_label()},
                        {"config_hash", hash_hex(text::fnv1a64(to_json(r->config).dump()))},
                        {"backend_id", r->backend_id},
                        {"wall_time_ms", r->wall_time.count()}});
  }
  return json{{"toolkit_version", kVersion},
              {"corpus_hash", hash_hex(corpus_hash(corpus))},
              {"corpus_size", corpus.size()},
              {"runs", runs}};
}

}  // namespace reident::harness
