// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reident/baselines.hpp"
#include "reident/categorizer.hpp"
#include "reident/error.hpp"
#include "reident/harness.hpp"
#include "reident/io.hpp"
#include "reident/masking.hpp"
#include "reident/metrics.hpp"
#include "reident/rag.hpp"
#include "reident/registry.hpp"
#include "reident/templates.hpp"
#include "reident/version.hpp"

namespace reident::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Bad flag combinations or output-path conflicts found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inputs and outputs a verb declared; checked before any work starts.
class Paths {
 public:
  explicit Paths(bool force) : force_(force) {}

  void input(const fs::path& p) { inputs_.push_back(p); }
  void output(const fs::path& p) { outputs_.push_back(p); }

  void check() const {
    for (std::size_t i = 0; i < outputs_.size(); ++i) {
      auto out = fs::weakly_canonical(outputs_[i]);
      for (const auto& in : inputs_) {
        if (fs::weakly_canonical(in) == out) {
          throw UsageError("output " + outputs_[i].string() + " would overwrite input " + in.string());
        }
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (fs::weakly_canonical(outputs_[j]) == out) {
          throw UsageError("output " + outputs_[i].string() + " is declared twice");
        }
      }
      if (!force_ && fs::exists(outputs_[i])) {
        throw UsageError(outputs_[i].string() + " exists; pass --force to overwrite");
      }
    }
  }

 private:
  bool force_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_output(const fs::path& p, std::string_view contents) {
  ensure_parent(p);
  io::write_file(p, contents);
}

std::string csv_string(const std::function<void(std::ostream&)>& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

json read_json(const fs::path& p) {
  try {
    return json::parse(io::read_file(p));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, p.string() + ": " + e.what());
  }
}

// Options shared by every verb that runs the harness.
struct RunFlags {
  std::string corpus;
  std::string backends_config;
  std::string gazetteer;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  double max_failure_ratio = 0.5;
  double alpha = kDefaultAlpha;
  double temperature = 1.0;
  std::string out_dir = "reident-report";
  bool keep_prompts = false;
  bool timing = false;
  bool force = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--corpus", f.corpus, "MaskedDocument JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--backends-config", f.backends_config,
                  "JSON file with {\"backends\": [...], \"templates\": [...]}")
      ->check(CLI::ExistingFile);
  cmd->add_option("--gazetteer", f.gazetteer, "Name gazetteer, one token per line")
      ->check(CLI::ExistingFile);
  cmd->add_option("--jobs", f.jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Seed for stochastic backends and baselines")->default_val(0);
  cmd->add_option("--max-failure-ratio", f.max_failure_ratio,
                  "Abort when more than this fraction of documents fails")
      ->default_val(0.5)
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--alpha", f.alpha, "W-PNMS weight on PNMS")->default_val(kDefaultAlpha)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--temperature", f.temperature, "Sampling temperature")->default_val(1.0);
  cmd->add_option("--out-dir", f.out_dir, "Directory for report files")->default_val("reident-report");
  cmd->add_flag("--keep-prompts", f.keep_prompts, "Store rendered prompts in the report");
  cmd->add_flag("--timing", f.timing, "Record wall time in the manifest (breaks byte-identity)");
  cmd->add_flag("--force", f.force, "Overwrite existing outputs");
}

struct Session {
  BackendRegistry registry = BackendRegistry::with_builtins();
  std::optional<categorizer::NameGazetteer> gazetteer;
  harness::RunOptions options;
  std::vector<MaskedDocument> corpus;
};

Session open_session(const RunFlags& f) {
  Session s;
  if (!f.backends_config.empty()) s.registry.load_config(read_json(f.backends_config));
  if (!f.gazetteer.empty()) s.gazetteer = categorizer::NameGazetteer::load(f.gazetteer);
  s.options.jobs = f.jobs;
  s.options.max_failure_ratio = f.max_failure_ratio;
  s.options.alpha = f.alpha;
  s.options.keep_prompts = f.keep_prompts;
  s.corpus = io::load_corpus(f.corpus);
  return s;
}

void finish_session(Session& s) {
  if (s.gazetteer) s.options.gazetteer = &*s.gazetteer;
}

json manifest_for(const std::vector<const harness::EvaluationReport*>& reports,
                  const std::vector<MaskedDocument>& corpus, bool timing) {
  auto m = harness::manifest(reports, corpus);
  if (!timing) {
    for (auto& run : m["runs"]) run.erase("wall_time_ms");
  }
  return m;
}

std::string histogram_rows(const std::string& label, const categorizer::Histogram& h) {
  std::string out;
  for (auto c : categorizer::kAllCategories) {
    auto it = h.find(c);
    out += label + "," + std::string(categorizer::to_string(c)) + "," +
           std::to_string(it == h.end() ? 0 : it->second) + "\n";
  }
  return out;
}

std::string score_line(const harness::EvaluationReport& r) {
  std::ostringstream s;
  s << r.config.display_label() << ": ";
  if (r.scores) {
    s << "PNMS=" << r.scores->pnms << " LNMS=" << r.scores->lnms << " NLD=" << r.scores->nld
      << " W-PNMS=" << r.scores->w_pnms << " (n=" << r.scores->example_count << ")";
  } else {
    s << "no scored examples";
  }
  s << ", failures=" << r.failures.size() << ", skipped=" << r.skipped.size();
  return s.str();
}

// Writes report.json, scores.csv, histogram.csv and manifest.json.
void write_single_report(const RunFlags& f, const harness::EvaluationReport& report,
                         const std::vector<MaskedDocument>& corpus, std::ostream& out) {
  fs::path dir = f.out_dir;
  fs::create_directories(dir);
  write_output(dir / "report.json", harness::to_json(report).dump(2) + "\n");
  write_output(dir / "scores.csv",
               csv_string([&](std::ostream& s) { harness::write_scores_csv(s, report); }));
  write_output(dir / "histogram.csv", csv_string([&](std::ostream& s) {
                 categorizer::write_histogram_csv(s, report.category_histogram);
               }));
  write_output(dir / "manifest.json", manifest_for({&report}, corpus, f.timing).dump(2) + "\n");
  out << score_line(report) << "\n";
  if (f.timing) out << "wall time: " << report.wall_time.count() << " ms\n";
  out << "wrote " << dir.string() << "/{report.json,scores.csv,histogram.csv,manifest.json}\n";
}

void declare_single_report(Paths& paths, const RunFlags& f) {
  fs::path dir = f.out_dir;
  for (const char* name : {"report.json", "scores.csv", "histogram.csv", "manifest.json"}) {
    paths.output(dir / name);
  }
}

// ---- mask -----------------------------------------------------------------

struct MaskFlags {
  std::string in;
  std::string out;
  std::string report;
  std::size_t min_chars = masking::kDefaultMinChars;
  std::size_t window = masking::kDefaultMaskWindow;
  std::string mask_token{kDefaultMaskToken};
  std::string paraphraser;
  std::string paraphrase_auth_env;
  std::size_t num_beams = 10;
  double temperature = 1.5;
  std::size_t max_in_flight = 4;
  std::size_t jobs = 1;
  bool force = false;
};

int run_mask(const MaskFlags& f, std::ostream& out) {
  Paths paths(f.force);
  paths.input(f.in);
  paths.output(f.out);
  if (!f.report.empty()) paths.output(f.report);
  paths.check();

  auto pages = io::load_raw_pages(f.in);
  std::shared_ptr<const masking::TextTransformProvider> paraphraser;
  masking::PipelineOptions options;
  options.min_chars = f.min_chars;
  options.window_chars = f.window;
  options.mask_token = f.mask_token;
  options.max_in_flight = f.max_in_flight;
  if (!f.paraphraser.empty()) {
    paraphraser = make_paraphraser(f.paraphraser, {f.num_beams, f.temperature}, f.paraphrase_auth_env);
    options.paraphraser = paraphraser.get();
  }
  auto outcomes = masking::mask_corpus(pages, options, f.jobs);

  std::vector<MaskedDocument> kept;
  std::map<std::string, std::size_t> dropped;
  for (auto r : {masking::DropReason::kTooShort, masking::DropReason::kNoEarlyMask,
                 masking::DropReason::kNoMatch}) {
    dropped[std::string(masking::to_string(r))] = 0;
  }
  json records = json::array();
  for (auto& o : outcomes) {
    auto rec = io::to_json(o.report);
    rec["id"] = o.id;
    records.push_back(std::move(rec));
    if (o.document) {
      kept.push_back(std::move(*o.document));
    } else if (o.report.drop_reason) {
      ++dropped[std::string(masking::to_string(*o.report.drop_reason))];
    }
  }
  ensure_parent(f.out);
  io::write_jsonl(f.out, kept);
  json summary{{"pages", pages.size()}, {"kept", kept.size()}, {"dropped", dropped}};
  if (!f.report.empty()) {
    json report = summary;
    report["min_chars"] = f.min_chars;
    report["window_chars"] = f.window;
    report["paraphraser"] = paraphraser ? json(paraphraser->id()) : json(nullptr);
    report["pages_detail"] = records;
    write_output(f.report, report.dump(2) + "\n");
  }
  out << summary.dump() << "\n";
  return kExitOk;
}

// ---- evaluate ---------------------------------------------------------------

struct EvalFlags {
  RunFlags run;
  std::string backend;
  std::string label;
  std::string template_id = "instruct";
  std::size_t top_n = 5;
  std::optional<std::size_t> max_chars;
  std::optional<std::size_t> sentences;
  std::string variant = "original";
  std::string decoding;
  std::string audit;
};

int run_evaluate(const EvalFlags& f, std::ostream& out) {
  Paths paths(f.run.force);
  paths.input(f.run.corpus);
  declare_single_report(paths, f.run);
  if (!f.audit.empty()) paths.output(f.audit);
  paths.check();

  auto session = open_session(f.run);
  finish_session(session);
  if (!f.audit.empty()) session.options.keep_prompts = true;
  session.registry.resolve(f.backend);
  harness::RunConfig config;
  config.label = f.label;
  config.backend = f.backend;
  config.template_id = f.template_id;
  if (f.max_chars) config.truncation = harness::CharLimit{*f.max_chars};
  if (f.sentences) config.truncation = harness::SentenceCap{*f.sentences};
  config.top_n = f.top_n;
  config.text_variant = harness::parse_text_variant(f.variant);
  if (!f.decoding.empty()) config.decoding = DecodingSpec::parse(f.decoding, f.run.temperature);
  config.seed = f.run.seed;

  auto report = harness::run(config, session.corpus, session.registry, session.options);
  if (!f.audit.empty()) {
    write_output(f.audit, harness::audit_jsonl(report));
    if (!f.run.keep_prompts) {
      for (auto& p : report.predictions) p.prompt.clear();
    }
  }
  write_single_report(f.run, report, session.corpus, out);
  return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepFlags {
  RunFlags run;
  std::vector<std::string> backends;
  std::vector<std::string> templates{"instruct"};
  std::vector<std::size_t> max_chars;
  std::vector<std::size_t> sentences;
  std::vector<std::size_t> top_n{5};
  std::vector<std::string> decodings;
  std::vector<std::string> variants{"original"};
};

std::vector<harness::RunConfig> expand(const SweepFlags& f) {
  std::vector<std::optional<harness::Truncation>> truncations;
  for (auto c : f.max_chars) truncations.emplace_back(harness::CharLimit{c});
  for (auto s : f.sentences) truncations.emplace_back(harness::SentenceCap{s});
  if (truncations.empty()) truncations.emplace_back(std::nullopt);
  std::vector<std::optional<DecodingSpec>> decodings;
  for (const auto& d : f.decodings) decodings.emplace_back(DecodingSpec::parse(d, f.run.temperature));
  if (decodings.empty()) decodings.emplace_back(std::nullopt);

  std::vector<harness::RunConfig> configs;
  for (const auto& b : f.backends) {
    for (const auto& t : f.templates) {
      for (const auto& tr : truncations) {
        for (auto n : f.top_n) {
          for (const auto& d : decodings) {
            for (const auto& v : f.variants) {
              harness::RunConfig c;
              c.backend = b;
              c.template_id = t;
              c.truncation = tr;
              c.top_n = n;
              c.decoding = d;
              c.text_variant = harness::parse_text_variant(v);
              c.seed = f.run.seed;
              configs.push_back(std::move(c));
            }
          }
        }
      }
    }
  }
  return configs;
}

int run_sweep(const SweepFlags& f, std::ostream& out) {
  Paths paths(f.run.force);
  paths.input(f.run.corpus);
  fs::path dir = f.run.out_dir;
  for (const char* name : {"scores.csv", "histograms.csv", "reports.json", "manifest.json"}) {
    paths.output(dir / name);
  }
  paths.check();

  auto session = open_session(f.run);
  finish_session(session);
  for (const auto& b : f.backends) session.registry.resolve(b);
  auto configs = expand(f);
  auto rows = harness::sweep(configs, session.corpus, session.registry, session.options);

  json reports = json::array();
  std::string histograms = "label,category,count\n";
  std::vector<const harness::EvaluationReport*> done;
  bool any_error = false;
  for (const auto& row : rows) {
    if (row.report) {
      reports.push_back(harness::to_json(*row.report));
      histograms += histogram_rows(row.config.display_label(), row.report->category_histogram);
      done.push_back(&*row.report);
      out << score_line(*row.report) << "\n";
    } else {
      any_error = true;
      out << row.config.display_label() << ": " << row.error.value_or("failed") << "\n";
    }
  }
  fs::create_directories(dir);
  write_output(dir / "scores.csv", csv_string([&](std::ostream& s) { harness::write_scores_csv(s, rows); }));
  write_output(dir / "histograms.csv", histograms);
  write_output(dir / "reports.json", reports.dump(2) + "\n");
  write_output(dir / "manifest.json", manifest_for(done, session.corpus, f.run.timing).dump(2) + "\n");
  out << "wrote " << dir.string() << "/{scores.csv,histograms.csv,reports.json,manifest.json}\n";
  return any_error ? kExitFailure : kExitOk;
}

// ---- baseline ---------------------------------------------------------------

struct BaselineFlags {
  RunFlags run;
  std::string kind;
  std::string pool;
  std::string first_names;
  std::string last_names;
  std::size_t top_n = baselines::kDefaultCandidates;
  std::optional<std::size_t> max_chars;
};

int run_baseline(const BaselineFlags& f, std::ostream& out) {
  Paths paths(f.run.force);
  paths.input(f.run.corpus);
  declare_single_report(paths, f.run);
  paths.check();
  if (!f.pool.empty() && (!f.first_names.empty() || !f.last_names.empty())) {
    throw UsageError("--pool excludes --first-names/--last-names");
  }
  if (f.first_names.empty() != f.last_names.empty()) {
    throw UsageError("--first-names and --last-names go together");
  }

  auto kind = f.kind == "random" ? baselines::BaselineKind::kRandom : baselines::BaselineKind::kMajority;
  auto pool = !f.pool.empty()          ? baselines::NamePool::from_full_names(baselines::read_lines(f.pool))
              : !f.first_names.empty() ? baselines::NamePool(baselines::read_lines(f.first_names),
                                                             baselines::read_lines(f.last_names))
              : kind == baselines::BaselineKind::kRandom ? baselines::NamePool::random_default()
                                                         : baselines::NamePool::majority_default();
  auto session = open_session(f.run);
  finish_session(session);
  BackendSpec spec;
  spec.id = "baseline:" + f.kind;
  spec.endpoint = spec.id;
  spec.top_n = f.top_n;
  session.registry.add(spec, std::make_shared<baselines::BaselineBackend>(kind, std::move(pool)));

  harness::RunConfig config;
  config.backend = spec.id;
  config.top_n = f.top_n;
  if (f.max_chars) config.truncation = harness::CharLimit{*f.max_chars};
  config.seed = f.run.seed;
  auto report = harness::run(config, session.corpus, session.registry, session.options);
  write_single_report(f.run, report, session.corpus, out);
  return kExitOk;
}

// ---- rag --------------------------------------------------------------------

struct RagFlags {
  std::string ruling;
  std::string articles;
  std::string backends_config;
  std::string summarizer = "mock:lead";
  std::string reader = "mock:linker";
  std::string embedder = "mock:hash";
  std::string embed_model;
  std::string embed_auth_env;
  std::string cache;
  std::size_t k = rag::kDefaultTopK;
  std::size_t chunk_size = rag::kDefaultChunkSize;
  std::size_t top_n = 5;
  std::string decoding = "beam:5";
  double temperature = 1.0;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  double max_failure_ratio = 0.5;
  std::string out = "rag_report.json";
  std::string trace;
  bool force = false;
};

int run_rag(const RagFlags& f, std::ostream& out) {
  Paths paths(f.force);
  paths.input(f.ruling);
  paths.input(f.articles);
  paths.output(f.out);
  if (!f.trace.empty()) paths.output(f.trace);
  paths.check();

  auto registry = BackendRegistry::with_builtins();
  if (!f.backends_config.empty()) registry.load_config(read_json(f.backends_config));
  const auto& summarizer = registry.resolve(f.summarizer);
  const auto& reader = registry.resolve(f.reader);
  auto embedder = make_embedder(f.embedder, f.embed_model, f.embed_auth_env);

  auto rulings = io::load_corpus(f.ruling);
  std::vector<rag::Chunk> chunks;
  for (const auto& a : io::load_articles(f.articles)) {
    auto part = rag::chunk_text(a.article_id, a.text, f.chunk_size);
    chunks.insert(chunks.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  rag::BuildOptions build;
  build.jobs = f.jobs;
  if (!f.cache.empty()) build.cache_path = f.cache;
  auto index = rag::ChunkIndex::build(std::move(chunks), *embedder, build);

  auto config = rag::RagConfig::defaults();
  config.k = f.k;
  config.top_n = f.top_n;
  config.decoding = DecodingSpec::parse(f.decoding, f.temperature);
  rag::RagBackends backends{*summarizer.backend, *reader.backend, *embedder, reader.spec.id};

  json records = json::array();
  json failures = json::array();
  std::string trace;
  std::vector<metrics::PerExampleScores> scored;
  for (const auto& ruling : rulings) {
    try {
      auto outcome = rag::reidentify(ruling, index, backends, config);
      json retrieved = json::array();
      for (const auto& r : outcome.retrieved) {
        const auto* chunk = index.find(r.chunk_id);
        retrieved.push_back(json{{"rank", r.rank},
                                 {"chunk_id", r.chunk_id},
                                 {"article_id", chunk ? chunk->article_id : ""},
                                 {"similarity", r.similarity}});
      }
      json rec{{"id", ruling.id()},
               {"predictions", outcome.predictions.predictions()},
               {"summary", outcome.summary},
               {"retrieved", retrieved}};
      trace += json{{"id", ruling.id()},
                    {"summary", outcome.summary},
                    {"retrieved", retrieved},
                    {"prompt", outcome.prompt},
                    {"raw_response", outcome.raw_response},
                    {"predictions", outcome.predictions.predictions()}}
                   .dump() +
               "\n";
      if (ruling.target() && !outcome.predictions.empty()) {
        auto s = metrics::score_example(*ruling.target(), outcome.predictions);
        rec["scores"] = json{{"pnms_hit", s.pnms_hit}, {"lnms_hit", s.lnms_hit}, {"min_nld", s.min_nld}};
        scored.push_back(std::move(s));
      }
      out << ruling.id() << ": " << (outcome.predictions.empty() ? std::string("(none)")
                                                                  : outcome.predictions.predictions().front())
          << "\n";
      records.push_back(std::move(rec));
    } catch (const Error& e) {
      failures.push_back(json{{"id", ruling.id()}, {"code", to_string(e.code())}, {"message", e.message()}});
      out << ruling.id() << ": failed: " << e.what() << "\n";
    }
  }
  if (!rulings.empty() &&
      static_cast<double>(failures.size()) > f.max_failure_ratio * static_cast<double>(rulings.size())) {
    throw Error(ErrorCode::kRunAborted, std::to_string(failures.size()) + " of " +
                                            std::to_string(rulings.size()) + " rulings failed");
  }
  json report{{"toolkit_version", kVersion},
              {"k", f.k},
              {"chunk_size", f.chunk_size},
              {"embedder", embedder->id()},
              {"summarizer", summarizer.spec.id},
              {"reader", reader.spec.id},
              {"index_size", index.size()},
              {"rulings", records},
              {"failures", failures}};
  if (!scored.empty()) {
    auto s = metrics::aggregate(scored);
    report["scores"] = json{{"pnms", s.pnms}, {"lnms", s.lnms}, {"nld", s.nld},
                            {"w_pnms", s.w_pnms}, {"alpha", s.alpha}, {"example_count", s.example_count}};
  } else {
    report["scores"] = nullptr;
  }
  write_output(f.out, report.dump(2) + "\n");
  if (!f.trace.empty()) write_output(f.trace, trace);
  out << "wrote " << f.out << "\n";
  return kExitOk;
}

// ---- categorize -------------------------------------------------------------

struct CategorizeFlags {
  std::string in;
  std::string out;
  std::string annotated;
  std::string gazetteer;
  bool force = false;
};

int run_categorize(const CategorizeFlags& f, std::ostream& out) {
  Paths paths(f.force);
  paths.input(f.in);
  paths.output(f.out);
  if (!f.annotated.empty()) paths.output(f.annotated);
  paths.check();

  auto gazetteer = f.gazetteer.empty() ? categorizer::NameGazetteer::builtin()
                                       : categorizer::NameGazetteer::load(f.gazetteer);
  auto histogram = categorizer::empty_histogram();
  std::string annotated;
  std::size_t line_no = 0;
  std::istringstream lines(io::read_file(f.in));
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
      std::vector<std::string> predictions;
      if (j.contains("predictions")) {
        predictions = j.at("predictions").get<std::vector<std::string>>();
      } else {
        predictions.push_back(j.at("prediction").get<std::string>());
      }
      auto source = j.value("source_text", "");
      auto token = j.value("mask_token", std::string(kDefaultMaskToken));
      json cats = json::array();
      for (const auto& p : predictions) {
        auto c = categorizer::categorize(p, source, token, gazetteer);
        ++histogram[c];
        cats.push_back(categorizer::to_string(c));
      }
      j["categories"] = cats;
      annotated += j.dump() + "\n";
    } catch (const json::exception& e) {
      throw CorpusError(ErrorCode::kParseError, line_no, e.what());
    }
  }
  write_output(f.out, csv_string([&](std::ostream& s) { categorizer::write_histogram_csv(s, histogram); }));
  if (!f.annotated.empty()) write_output(f.annotated, annotated);
  for (auto c : categorizer::kAllCategories) out << categorizer::to_string(c) << ": " << histogram[c] << "\n";
  return kExitOk;
}

// ---- report -----------------------------------------------------------------

struct ReportFlags {
  std::string in;
  std::string out;
  std::string format = "markdown";
  bool force = false;
};

int run_report(const ReportFlags& f, std::ostream& out) {
  Paths paths(f.force);
  paths.input(f.in);
  if (!f.out.empty()) paths.output(f.out);
  paths.check();

  auto j = read_json(f.in);
  std::vector<harness::EvaluationReport> reports;
  if (j.is_array()) {
    for (const auto& r : j) reports.push_back(harness::report_from_json(r));
  } else {
    reports.push_back(harness::report_from_json(j));
  }
  std::string rendered;
  if (f.format == "markdown") {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i) rendered += "\n";
      rendered += harness::render_markdown(reports[i]);
    }
  } else if (f.format == "csv") {
    std::vector<harness::SweepRow> rows;
    for (auto& r : reports) rows.push_back({r.config, r, std::nullopt});
    rendered = csv_string([&](std::ostream& s) { harness::write_scores_csv(s, rows); });
  } else {
    rendered = "label,category,count\n";
    for (const auto& r : reports) rendered += histogram_rows(r.config.display_label(), r.category_histogram);
  }
  if (f.out.empty()) {
    out << rendered;
  } else {
    write_output(f.out, rendered);
  }
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Re-identification risk assessment for masked documents", "reident"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "",
                 "TOML file supplying any long flag; sections name verbs, e.g. [evaluate]");
  app.require_subcommand(1);
  app.fallthrough();

  MaskFlags mask;
  auto* mask_cmd = app.add_subcommand("mask", "Mask target names in raw pages");
  mask_cmd->add_option("--in", mask.in, "Raw page JSONL")->required()->check(CLI::ExistingFile);
  mask_cmd->add_option("--out", mask.out, "MaskedDocument JSONL to write")->required();
  mask_cmd->add_option("--report", mask.report, "Masking report JSON to write");
  mask_cmd->add_option("--min-chars", mask.min_chars, "Keep pages longer than this")->default_val(mask.min_chars);
  mask_cmd->add_option("--window", mask.window, "A mask must start within this many characters")
      ->default_val(mask.window)
      ->check(CLI::PositiveNumber);
  mask_cmd->add_option("--mask-token", mask.mask_token, "Placeholder text")->default_val(mask.mask_token);
  mask_cmd->add_option("--paraphraser", mask.paraphraser, "identity, mock:wrap or an http(s) URL");
  mask_cmd->add_option("--paraphrase-auth-env", mask.paraphrase_auth_env,
                       "Environment variable holding the paraphraser bearer token");
  mask_cmd->add_option("--num-beams", mask.num_beams, "Paraphraser beams")->default_val(mask.num_beams);
  mask_cmd->add_option("--paraphrase-temperature", mask.temperature, "Paraphraser temperature")
      ->default_val(mask.temperature);
  mask_cmd->add_option("--max-in-flight", mask.max_in_flight, "Concurrent paraphrase requests per page")
      ->default_val(mask.max_in_flight)
      ->check(CLI::PositiveNumber);
  mask_cmd->add_option("--jobs", mask.jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
  mask_cmd->add_flag("--force", mask.force, "Overwrite existing outputs");

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score one backend over a masked corpus");
  add_run_flags(eval_cmd, eval.run);
  eval_cmd->add_option("--backend", eval.backend, "Registered backend id or locator")->required();
  eval_cmd->add_option("--label", eval.label, "Run label");
  eval_cmd->add_option("--template", eval.template_id, "Prompt template id")->default_val("instruct");
  eval_cmd->add_option("--top-n", eval.top_n, "Predictions per document")->default_val(5)->check(CLI::PositiveNumber);
  auto* chars_opt = eval_cmd->add_option("--max-chars", eval.max_chars, "Character limit")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--sentences", eval.sentences, "Sentence cap")->check(CLI::PositiveNumber)->excludes(chars_opt);
  eval_cmd->add_option("--variant", eval.variant, "original or paraphrased")
      ->default_val("original")
      ->check(CLI::IsMember({"original", "paraphrased"}));
  eval_cmd->add_option("--decoding", eval.decoding, "greedy, beam:N, top_k:N or top_p:P");
  eval_cmd->add_option("--audit", eval.audit, "JSONL audit log of prompts and raw responses");

  SweepFlags sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the cross product of configurations");
  add_run_flags(sweep_cmd, sw.run);
  sweep_cmd->add_option("--backend", sw.backends, "Backend ids or locators")->required()->delimiter(',');
  sweep_cmd->add_option("--template", sw.templates, "Prompt template ids")->delimiter(',')->default_val("instruct");
  sweep_cmd->add_option("--max-chars", sw.max_chars, "Character limits")->delimiter(',');
  sweep_cmd->add_option("--sentences", sw.sentences, "Sentence caps")->delimiter(',');
  sweep_cmd->add_option("--top-n", sw.top_n, "Prediction counts")->delimiter(',')->default_val(5);
  sweep_cmd->add_option("--decoding", sw.decodings, "Decoding strategies")->delimiter(',');
  sweep_cmd->add_option("--variant", sw.variants, "original and/or paraphrased")
      ->delimiter(',')
      ->default_val("original")
      ->check(CLI::IsMember({"original", "paraphrased"}));

  BaselineFlags bl;
  auto* baseline_cmd = app.add_subcommand("baseline", "Score the random or majority baseline");
  add_run_flags(baseline_cmd, bl.run);
  baseline_cmd->add_option("--kind", bl.kind, "random or majority")
      ->required()
      ->check(CLI::IsMember({"random", "majority"}));
  baseline_cmd->add_option("--pool", bl.pool, "Full names, one per line")->check(CLI::ExistingFile);
  baseline_cmd->add_option("--first-names", bl.first_names, "First names, one per line")->check(CLI::ExistingFile);
  baseline_cmd->add_option("--last-names", bl.last_names, "Last names, one per line")->check(CLI::ExistingFile);
  baseline_cmd->add_option("--top-n", bl.top_n, "Predictions per document")
      ->default_val(bl.top_n)
      ->check(CLI::PositiveNumber);
  baseline_cmd->add_option("--max-chars", bl.max_chars, "Character limit")->check(CLI::PositiveNumber);

  RagFlags rg;
  auto* rag_cmd = app.add_subcommand("rag", "Re-identify rulings through retrieved articles");
  rag_cmd->add_option("--ruling", rg.ruling, "MaskedDocument JSONL of rulings")->required()->check(CLI::ExistingFile);
  rag_cmd->add_option("--articles", rg.articles, "Article JSONL")->required()->check(CLI::ExistingFile);
  rag_cmd->add_option("--backends-config", rg.backends_config, "Backend registry JSON")->check(CLI::ExistingFile);
  rag_cmd->add_option("--summarizer", rg.summarizer, "Summarizer backend")->default_val(rg.summarizer);
  rag_cmd->add_option("--reader", rg.reader, "Reader backend")->default_val(rg.reader);
  rag_cmd->add_option("--embedder", rg.embedder, "mock:hash[:dim] or an http(s) URL")->default_val(rg.embedder);
  rag_cmd->add_option("--embed-model", rg.embed_model, "Model name sent to a remote embedder");
  rag_cmd->add_option("--embed-auth-env", rg.embed_auth_env, "Environment variable holding the embedder token");
  rag_cmd->add_option("--cache", rg.cache, "Embedding cache file");
  rag_cmd->add_option("--k", rg.k, "Retrieved chunks")->default_val(rg.k)->check(CLI::PositiveNumber);
  rag_cmd->add_option("--chunk-size", rg.chunk_size, "Characters per chunk")
      ->default_val(rg.chunk_size)
      ->check(CLI::PositiveNumber);
  rag_cmd->add_option("--top-n", rg.top_n, "Predictions per ruling")->default_val(rg.top_n)->check(CLI::PositiveNumber);
  rag_cmd->add_option("--decoding", rg.decoding, "Reader decoding")->default_val(rg.decoding);
  rag_cmd->add_option("--temperature", rg.temperature, "Reader temperature")->default_val(rg.temperature);
  rag_cmd->add_option("--seed", rg.seed, "Seed forwarded to backends")->default_val(0);
  rag_cmd->add_option("--jobs", rg.jobs, "Worker threads for embedding")->default_val(1)->check(CLI::PositiveNumber);
  rag_cmd->add_option("--max-failure-ratio", rg.max_failure_ratio, "Abort threshold")
      ->default_val(0.5)
      ->check(CLI::Range(0.0, 1.0));
  rag_cmd->add_option("--out", rg.out, "Report JSON to write")->default_val(rg.out);
  rag_cmd->add_option("--trace", rg.trace, "JSONL retrieval trace to write");
  rag_cmd->add_flag("--force", rg.force, "Overwrite existing outputs");

  CategorizeFlags cat;
  auto* cat_cmd = app.add_subcommand("categorize", "Histogram prediction categories");
  cat_cmd->add_option("--in", cat.in, "JSONL with prediction(s), source_text, mask_token")
      ->required()
      ->check(CLI::ExistingFile);
  cat_cmd->add_option("--out", cat.out, "Histogram CSV to write")->required();
  cat_cmd->add_option("--annotated", cat.annotated, "Input lines with categories added");
  cat_cmd->add_option("--gazetteer", cat.gazetteer, "Name gazetteer")->check(CLI::ExistingFile);
  cat_cmd->add_flag("--force", cat.force, "Overwrite existing outputs");

  ReportFlags rep;
  auto* report_cmd = app.add_subcommand("report", "Render report JSON as tables");
  report_cmd->add_option("--in", rep.in, "report.json or reports.json")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--format", rep.format, "markdown, csv or histogram")
      ->default_val("markdown")
      ->check(CLI::IsMember({"markdown", "csv", "histogram"}));
  report_cmd->add_option("--out", rep.out, "File to write instead of stdout");
  report_cmd->add_flag("--force", rep.force, "Overwrite existing outputs");

  for (auto* sub : app.get_subcommands({})) sub->configurable();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitUsage;
  }

  try {
    if (*mask_cmd) return run_mask(mask, out);
    if (*eval_cmd) return run_evaluate(eval, out);
    if (*sweep_cmd) return run_sweep(sw, out);
    if (*baseline_cmd) return run_baseline(bl, out);
    if (*rag_cmd) return run_rag(rg, out);
    if (*cat_cmd) return run_categorize(cat, out);
    if (*report_cmd) return run_report(rep, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kUnknownBackend || e.code() == ErrorCode::kInvalidArgument ? kExitUsage
                                                                                           : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace reident::cli
