// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reident/baselines.hpp"
#include "reident/builtin_data.hpp"
#include "reident/harness.hpp"
#include "reident/io.hpp"
#include "reident/metrics.hpp"
#include "reident/mocks.hpp"
#include "reident/rag.hpp"
#include "reident/text.hpp"
#include "test_support.hpp"

#ifdef REIDENT_HAVE_CLI
#include "cli.hpp"
#endif

using namespace reident;
using testing::make_doc;

namespace {

// Collects failed checks for one criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(failed_) + " failed check(s)";
    for (const auto& f : failures_) s += "; " + f;
    return s;
  }

 private:
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome nld_worked_example() {
  auto target = normalize_name("Alina Cooper");
  std::vector<std::string> preds{"Alice Cooper"};
  double got = metrics::min_nld(target, preds);
  double oracle = static_cast<double>(testing::naive_levenshtein("Alice Cooper", "Alina Cooper")) /
                  static_cast<double>(std::string("Alina Cooper").size());
  bool ok = std::abs(got - 0.1667) <= 0.0001 && std::abs(got - oracle) < 1e-12 &&
            std::floor(got * 100.0) / 100.0 == 0.16;
  return {ok, "min_nld=" + fmt(got) + " oracle=" + fmt(oracle)};
}

Outcome wpnms_table() {
  struct Row {
    double pnms, lnms, reported;
  };
  const Row rows[] = {{0.35, 0.25, 0.29}, {0.33, 0.24, 0.27}, {0.33, 0.22, 0.26}, {0.28, 0.19, 0.22}};
  Checker c;
  std::string detail;
  for (const auto& r : rows) {
    double w = metrics::weighted_pnms(r.pnms, r.lnms, 0.35);
    // Tolerance is 0.005 in decimal terms; 1e-9 absorbs binary representation
    // of values such as 0.285 that sit exactly on the boundary.
    c.expect(std::abs(w - r.reported) <= 0.005 + 1e-9,
             fmt(r.pnms, 2) + "," + fmt(r.lnms, 2) + " -> " + fmt(w));
    detail += fmt(w) + " ";
  }
  return {c.ok(), c.ok() ? "w_pnms = " + detail : c.summary()};
}

Outcome inverse_consistency() {
  const double alpha = 0.35;
  double implied = (0.65 - alpha * 0.71) / (1.0 - alpha);
  // 1000 scored examples: 710 partial hits, 618 of which also hit the last name.
  auto target = normalize_name("Anna Berger");
  std::vector<metrics::PerExampleScores> ex;
  for (int i = 0; i < 1000; ++i) {
    std::string p = i < 618 ? "Tom Berger" : i < 710 ? "Anna Smith" : "Quincy Zed";
    PredictionSet set("d" + std::to_string(i), {p}, 1, "fixture", DecodingSpec{});
    ex.push_back(metrics::score_example(target, set));
  }
  auto s = metrics::aggregate(ex, alpha);
  bool ok = std::abs(implied - 0.618) < 0.0005 && s.pnms == 0.71 && s.lnms == 0.618 &&
            std::abs(s.w_pnms - 0.65) <= 0.005;
  return {ok, "implied lnms=" + fmt(implied) + ", aggregate w_pnms=" + fmt(s.w_pnms)};
}

// Random ASCII names built from a small alphabet so matches are common.
std::string random_word(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len) {
  static const std::string letters = "abeilnorst";
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  std::string w;
  auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) w += letters[pick(rng)];
  if (!w.empty() && rng() % 2) w[0] = static_cast<char>(std::toupper(w[0]));
  return w;
}

std::string ascii_upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

std::string prediction_for(std::mt19937_64& rng, const std::vector<std::string>& parts) {
  switch (rng() % 5) {
    case 0: return parts[rng() % parts.size()] + " " + random_word(rng, 2, 7);
    case 1: {
      const auto& p = parts[rng() % parts.size()];
      auto from = rng() % p.size();
      return random_word(rng, 1, 4) + " " + p.substr(from, 1 + rng() % (p.size() - from));
    }
    case 2: return random_word(rng, 1, 3);
    default: return random_word(rng, 2, 7) + " " + random_word(rng, 2, 7);
  }
}

Outcome metric_properties() {
  std::mt19937_64 rng(20260101);
  Checker c;
  std::vector<metrics::PerExampleScores> batch;
  for (int inst = 0; inst < 10000; ++inst) {
    std::vector<std::string> raw_parts;
    auto nparts = 1 + rng() % 3;
    for (std::size_t i = 0; i < nparts; ++i) raw_parts.push_back(random_word(rng, 2, 8));
    auto target = normalize_name(text::join(raw_parts, " "));
    auto upper_target = normalize_name(ascii_upper(target.full_name()));
    auto n = 1 + rng() % 6;
    std::vector<std::string> preds;
    for (std::size_t i = 0; i < n; ++i) preds.push_back(prediction_for(rng, target.parts()));

    // Monotonicity in n.
    metrics::PerExampleScores prev;
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<std::string> prefix(preds.begin(), preds.begin() + static_cast<long>(k));
      auto s = metrics::score_example(target, PredictionSet("x", prefix, k, "t", DecodingSpec{}));
      if (k > 1) {
        c.expect(!prev.pnms_hit || s.pnms_hit, "pnms decreased with n");
        c.expect(!prev.lnms_hit || s.lnms_hit, "lnms decreased with n");
        c.expect(s.min_nld <= prev.min_nld, "min_nld increased with n");
      }
      prev = s;
    }
    c.expect(prev.min_nld >= 0.0, "negative min_nld");
    batch.push_back(prev);

    for (const auto& p : preds) {
      bool pn = metrics::pnms_match(target, p);
      bool ln = metrics::lnms_match(target, p);
      c.expect(pn == testing::oracle_token_match(target.parts(), p), "pnms vs oracle: " + p);
      c.expect(ln == testing::oracle_token_match({target.last_name()}, p), "lnms vs oracle: " + p);
      // Case invariance on either side.
      c.expect(metrics::pnms_match(upper_target, p) == pn, "pnms case (target)");
      c.expect(metrics::pnms_match(target, ascii_upper(p)) == pn, "pnms case (prediction)");
      c.expect(metrics::lnms_match(upper_target, p) == ln, "lnms case (target)");
      c.expect(metrics::lnms_match(target, ascii_upper(p)) == ln, "lnms case (prediction)");
    }

    // Levenshtein axioms against the naive recursion on short strings.
    auto a = random_word(rng, 0, 8);
    auto b = random_word(rng, 0, 8);
    auto d = random_word(rng, 0, 8);
    auto ab = metrics::levenshtein(a, b);
    c.expect(ab == testing::naive_levenshtein(a, b), "levenshtein vs naive: " + a + "/" + b);
    c.expect(metrics::levenshtein(a, a) == 0, "identity");
    c.expect((ab == 0) == (a == b), "zero iff equal");
    c.expect(ab == metrics::levenshtein(b, a), "symmetry");
    c.expect(ab <= metrics::levenshtein(a, d) + metrics::levenshtein(d, b), "triangle");

    if (batch.size() == 50) {
      std::uniform_real_distribution<double> alpha(0.0, 1.0);
      double al = alpha(rng);
      auto s = metrics::aggregate(batch, al);
      double lo = std::min(s.pnms, s.lnms);
      double hi = std::max(s.pnms, s.lnms);
      c.expect(s.w_pnms >= lo - 1e-12 && s.w_pnms <= hi + 1e-12, "w_pnms outside [min,max]");
      c.expect(std::abs(s.w_pnms - (al * s.pnms + (1 - al) * s.lnms)) <= 1e-9, "w_pnms formula");
      c.expect(s.w_pnms >= 0.0 && s.w_pnms <= 1.0, "w_pnms outside [0,1]");
      batch.clear();
    }
  }
  return {c.ok(), c.ok() ? "10000 instances, all properties hold" : c.summary()};
}

Outcome retrieval_oracle() {
  std::mt19937_64 rng(77);
  const std::vector<std::string> vocab{"court", "ruling", "fraud", "boat", "club", "river", "anna"};
  Checker c;
  for (int trial = 0; trial < 100; ++trial) {
    mocks::HashingEmbedder embedder(4 + rng() % 12);
    auto words = [&](std::size_t n) {
      std::string s;
      for (std::size_t i = 0; i < n; ++i) s += vocab[rng() % vocab.size()] + " ";
      return s;
    };
    std::vector<rag::Chunk> chunks;
    auto count = 1 + rng() % 100;
    for (std::size_t i = 0; i < count; ++i) {
      // Shuffled ids so insertion order differs from id order.
      chunks.push_back({"c" + std::to_string(rng() % 100000) + "-" + std::to_string(i), "a",
                        words(1 + rng() % 4), std::nullopt});
    }
    auto index = rag::ChunkIndex::build(chunks, embedder);
    std::vector<std::string> q{words(1 + rng() % 4)};
    auto qv = embedder.embed(q).front();
    auto k = 1 + rng() % (count + 3);
    auto got = rag::query(index, qv, k);

    std::vector<std::pair<double, std::string>> all;
    for (const auto& ch : index.chunks()) {
      double dot = 0, na = 0, nb = 0;
      for (std::size_t i = 0; i < qv.size(); ++i) {
        dot += static_cast<double>(qv[i]) * (*ch.vector)[i];
        na += static_cast<double>(qv[i]) * qv[i];
        nb += static_cast<double>((*ch.vector)[i]) * (*ch.vector)[i];
      }
      double sim = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
      all.emplace_back(sim, ch.id);
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    all.resize(std::min<std::size_t>(k, all.size()));
    c.expect(got.size() == all.size(), "result size");
    for (std::size_t i = 0; i < std::min(got.size(), all.size()); ++i) {
      c.expect(got[i].chunk_id == all[i].second, "trial " + std::to_string(trial) + " rank " +
                                                     std::to_string(i + 1));
      c.expect(got[i].similarity == all[i].first, "similarity value");
      c.expect(got[i].rank == i + 1, "rank numbering");
    }
  }
  return {c.ok(), c.ok() ? "100 random indices match the full sort" : c.summary()};
}

std::vector<rag::Chunk> article_chunks(const std::string& file) {
  std::vector<rag::Chunk> out;
  for (const auto& a : io::load_articles(testing::fixture(file))) {
    auto cs = rag::chunk_text(a.article_id, a.text, 1000);
    out.insert(out.end(), cs.begin(), cs.end());
  }
  return out;
}

Outcome three_clue_fixture() {
  const std::string planted = "Anna Berger";
  auto ruling = io::load_corpus(testing::fixture("three_clue_ruling.jsonl")).front();
  mocks::HashingEmbedder embedder(256);
  mocks::LeadSentencesBackend summarizer(2);
  auto names = baselines::parse_lines(builtin::gazetteer());
  mocks::ContextLinkerBackend reader({names.begin(), names.end()});
  auto config = rag::RagConfig::defaults();
  Checker c;

  auto index = rag::ChunkIndex::build(article_chunks("three_clue_articles.jsonl"), embedder);
  auto summary = rag::summarize_ruling(ruling, summarizer, config);
  c.expect(summary.find(ruling.mask_token()) != std::string::npos, "summary lost the mask");

  // Every single chunk as the only context: the name must never come out.
  std::size_t single_hits = 0;
  for (const auto& chunk : index.chunks()) {
    GenerationRequest req;
    req.prompt = rag::compose_prompt(config, summary, {chunk.text}, ruling.mask_token());
    req.visible_text = summary;
    req.documents = {chunk.text};
    req.candidates = config.top_n;
    req.document = &ruling;
    auto texts = reader.generate(req).texts;
    if (std::find(texts.begin(), texts.end(), planted) != texts.end()) ++single_hits;
  }
  c.expect(single_hits == 0, std::to_string(single_hits) + " single-chunk context(s) succeeded");

  rag::RagBackends backends{summarizer, reader, embedder, "mock:linker"};
  auto full = rag::reidentify(ruling, index, backends, config);
  const auto& top = full.predictions.predictions();
  c.expect(!top.empty() && top.front() == planted,
           "full pipeline rank 1 = " + (top.empty() ? std::string("(none)") : top.front()));

  auto unrelated = rag::ChunkIndex::build(article_chunks("unrelated_articles.jsonl"), embedder);
  auto miss = rag::reidentify(ruling, unrelated, backends, config);
  const auto& mp = miss.predictions.predictions();
  c.expect(std::find(mp.begin(), mp.end(), planted) == mp.end(), "unrelated index still found the name");
  return {c.ok(), c.ok() ? std::to_string(index.size()) + " chunks; single-chunk hits 0; full rank 1 = " +
                               top.front() + "; unrelated-only miss"
                         : c.summary()};
}

// Names over q, x and z only; no pool token can be inside them and none of
// them is inside a pool token.
std::string disjoint_name(std::mt19937_64& rng) {
  static const std::string letters = "qxz";
  auto word = [&] {
    std::string w(1, 'Q');
    for (int i = 0; i < 5; ++i) w += letters[rng() % 3];
    return w;
  };
  return word() + " " + word();
}

Outcome baseline_floor() {
  Checker c;
  std::mt19937_64 rng(4242);
  auto random_pool = baselines::NamePool::random_default();
  auto majority_pool = baselines::NamePool::majority_default();
  const std::size_t n = 5;
  const std::size_t N = 1000;

  auto reg = BackendRegistry::with_builtins();
  reg.resolve("baseline:random");
  reg.resolve("baseline:majority");
  auto score = [&](const std::string& backend, const std::vector<MaskedDocument>& corpus) {
    harness::RunConfig cfg;
    cfg.backend = backend;
    cfg.top_n = n;
    cfg.seed = 31337;
    cfg.template_id = "fill_mask";
    harness::RunOptions opts;
    opts.jobs = 4;
    return harness::run(cfg, corpus, reg, opts);
  };

  // Token-disjoint corpus.
  std::vector<MaskedDocument> disjoint;
  for (std::size_t i = 0; i < N; ++i) {
    auto name = disjoint_name(rng);
    auto parts = testing::ascii_tokens(name);
    for (const auto* pool : {&random_pool, &majority_pool}) {
      for (const auto& t : pool->first_names()) c.expect(!testing::oracle_token_match(parts, t), "overlap " + t);
      for (const auto& t : pool->last_names()) c.expect(!testing::oracle_token_match(parts, t), "overlap " + t);
    }
    disjoint.push_back(make_doc("dj" + std::to_string(i), "<mask> lived here.", name));
  }
  for (const auto* b : {"baseline:random", "baseline:majority"}) {
    auto r = score(b, disjoint);
    c.expect(r.scores && r.scores->example_count == N, std::string(b) + " scored count");
    c.expect(r.scores && r.scores->pnms == 0.0 && r.scores->lnms == 0.0,
             std::string(b) + " scored above zero on disjoint targets");
  }

  // Corpus with known overlap: targets reuse pool first and/or last names.
  std::vector<MaskedDocument> overlap;
  std::vector<double> p_hit;
  double majority_expected = 0;
  auto choose = [](std::size_t total, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) r *= static_cast<double>(total - i) / static_cast<double>(k - i);
    return r;
  };
  for (std::size_t i = 0; i < N; ++i) {
    auto filler = disjoint_name(rng);
    auto fparts = testing::ascii_tokens(filler);
    std::string first = fparts[0];
    std::string last = fparts[1];
    switch (rng() % 4) {
      case 0: first = random_pool.first_names()[rng() % 50]; break;
      case 1: last = random_pool.last_names()[rng() % 50]; break;
      case 2:
        first = random_pool.first_names()[rng() % 50];
        last = random_pool.last_names()[rng() % 50];
        break;
      default: break;
    }
    std::vector<std::string> parts{first, last};
    auto count = [&](const std::vector<std::string>& tokens) {
      return static_cast<std::size_t>(std::count_if(tokens.begin(), tokens.end(), [&](const std::string& t) {
        return testing::oracle_token_match(parts, t);
      }));
    };
    auto F = random_pool.first_names().size();
    auto L = random_pool.last_names().size();
    auto a = count(random_pool.first_names());
    auto b = count(random_pool.last_names());
    double miss = (a > F - n ? 0.0 : choose(F - a, n) / choose(F, n)) *
                  (b > L - n ? 0.0 : choose(L - b, n) / choose(L, n));
    p_hit.push_back(1.0 - miss);

    bool maj = false;
    for (std::size_t j = 0; j < n; ++j) {
      maj = maj || testing::oracle_token_match(parts, majority_pool.first_names()[j]) ||
            testing::oracle_token_match(parts, majority_pool.last_names()[j]);
    }
    majority_expected += maj ? 1.0 : 0.0;
    overlap.push_back(make_doc("ov" + std::to_string(i), "<mask> lived here.", first + " " + last));
  }
  double expected = std::accumulate(p_hit.begin(), p_hit.end(), 0.0) / N;
  double var = 0;
  for (double p : p_hit) var += p * (1 - p);
  double sd = std::sqrt(var) / N;
  auto rr = score("baseline:random", overlap);
  double observed = rr.scores ? rr.scores->pnms : -1.0;
  c.expect(std::abs(observed - expected) <= 3 * sd,
           "random PNMS " + fmt(observed) + " vs expected " + fmt(expected) + " +- " + fmt(3 * sd));
  auto mr = score("baseline:majority", overlap);
  c.expect(mr.scores && mr.scores->pnms == majority_expected / N, "majority PNMS differs from enumeration");

  return {c.ok(), c.ok() ? "disjoint: 0/0 for both; overlap random PNMS " + fmt(observed) +
                               " vs " + fmt(expected) + " (3sd " + fmt(3 * sd) + "), majority " +
                               fmt(majority_expected / N)
                         : c.summary()};
}

Outcome determinism() {
#ifdef REIDENT_HAVE_CLI
  testing::TempDir dir;
  std::vector<MaskedDocument> corpus;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    corpus.push_back(make_doc("doc-" + std::to_string(i),
                              "<mask> appeared in case " + std::to_string(rng() % 1000) + ".",
                              i % 5 ? std::optional<std::string>("Mary Smith") : std::nullopt));
  }
  io::write_jsonl(dir / "corpus.jsonl", corpus);
  Checker c;
  auto run_cli = [&](const std::string& backend, const std::string& out, const std::string& jobs) {
    std::ostringstream so;
    std::ostringstream se;
    int code = cli::dispatch({"evaluate", "--corpus", (dir / "corpus.jsonl").string(), "--backend",
                              backend, "--seed", "1234", "--jobs", jobs, "--out-dir", (dir / out).string()},
                             so, se);
    c.expect(code == 0, "evaluate exit " + std::to_string(code) + ": " + se.str());
    return io::read_file(dir / out / "report.json") + io::read_file(dir / out / "manifest.json");
  };
  for (const auto* backend : {"baseline:random", "mock:ranked:5", "baseline:majority"}) {
    auto a = run_cli(backend, std::string(backend).replace(0, 0, "a-").substr(0, 40) + "1", "1");
    auto b = run_cli(backend, std::string(backend).replace(0, 0, "b-").substr(0, 40) + "1", "1");
    auto d = run_cli(backend, std::string(backend).replace(0, 0, "c-").substr(0, 40) + "4", "4");
    c.expect(a == b, std::string(backend) + ": reruns differ");
    c.expect(a == d, std::string(backend) + ": jobs=1 and jobs=4 differ");
  }
  return {c.ok(), c.ok() ? "report.json and manifest.json byte-identical across reruns and job counts"
                         : c.summary()};
#else
  return {false, "built without the CLI"};
#endif
}

Outcome non_reproducibility_note() {
  std::cout
      << "    NOTE: absolute benchmark numbers (large-model scores and the input-length,\n"
         "    top-n and decoding curves) need the original 10K Wikipedia sample, 7.7K court rulings\n"
         "    and large hosted models. They are NOT reproducible at desk scale. Criteria 1-8 stand in\n"
         "    with property-based checks and worked arithmetic; the sweep below reproduces the shape\n"
         "    of the input-length curve with a step-function mock.\n";
  // The clue sits at a document-specific offset; the mock answers correctly
  // only once the clue is inside the window.
  std::vector<MaskedDocument> corpus;
  for (int i = 0; i < 80; ++i) {
    std::size_t offset = 100 + static_cast<std::size_t>(i) * 47;
    std::string body = "<mask> " + std::string(offset - 7, 'x') + "[clue]" + std::string(200, 'y');
    corpus.push_back(make_doc("len-" + std::to_string(i), body, "Rosa Parks"));
  }
  auto reg = BackendRegistry::with_builtins();
  reg.resolve("mock:clue");
  std::vector<harness::RunConfig> configs;
  for (std::size_t chars : {500, 1000, 2000, 4000}) {
    harness::RunConfig cfg;
    cfg.backend = "mock:clue";
    cfg.template_id = "fill_mask";
    cfg.truncation = harness::CharLimit{chars};
    configs.push_back(cfg);
  }
  auto rows = harness::sweep(configs, corpus, reg);
  std::vector<double> curve;
  for (const auto& r : rows) curve.push_back(r.report && r.report->scores ? r.report->scores->pnms : -1);
  bool monotone = std::is_sorted(curve.begin(), curve.end());
  bool rising = curve.front() < curve.back();
  std::string detail = "PNMS at 500/1000/2000/4000 chars:";
  for (double v : curve) detail += " " + fmt(v, 3);
  return {monotone && rising && curve.front() >= 0.0, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria{
      {"NLD worked example", nld_worked_example},
      {"W-PNMS table consistency", wpnms_table},
      {"inverse consistency (w_pnms 0.65, pnms 0.71)", inverse_consistency},
      {"metric property suite", metric_properties},
      {"retrieval oracle equivalence", retrieval_oracle},
      {"three-clue retrieval fixture", three_clue_fixture},
      {"baseline floor", baseline_floor},
      {"pipeline determinism", determinism},
      {"non-reproducibility note and length-curve shape", non_reproducibility_note},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". [PRIMARY] " << criteria[i].name << " - "
              << o.detail << " (" << ms.count() << " ms)" << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
