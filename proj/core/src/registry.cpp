// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/registry.hpp"

#include <nlohmann/json.hpp>

#include "reident/baselines.hpp"
#include "reident/builtin_data.hpp"
#include "reident/error.hpp"
#include "reident/http.hpp"
#include "reident/mocks.hpp"
#include "reident/templates.hpp"
#include "reident/text.hpp"

namespace reident {
namespace {

std::pair<std::string_view, std::string_view> split_once(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) return {s, {}};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

std::size_t to_count(std::string_view s, std::size_t fallback) {
  if (s.empty()) return fallback;
  try {
    auto v = std::stoull(std::string(s));
    if (v == 0) throw Error(ErrorCode::kInvalidArgument, "count must be >= 1");
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidArgument, "bad count '" + std::string(s) + "'");
  }
}

bool is_url(std::string_view s) { return s.starts_with("http://") || s.starts_with("https://"); }

std::vector<std::string> split_bar(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto bar = s.find('|', start);
    out.emplace_back(text::trim(s.substr(start, bar - start)));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

}  // namespace

std::shared_ptr<const Backend> make_backend(const BackendSpec& spec) {
  std::string_view locator = spec.endpoint;
  if (is_url(locator)) {
    return std::make_shared<http::HttpBackend>(spec.endpoint, spec.model.empty() ? spec.id : spec.model,
                                               http::ClientOptions{spec.auth_env});
  }
  auto [scheme, rest] = split_once(locator);
  if (scheme == "baseline") {
    if (rest == "random") {
      return std::make_shared<baselines::BaselineBackend>(baselines::BaselineKind::kRandom,
                                                          baselines::NamePool::random_default());
    }
    if (rest == "majority") {
      return std::make_shared<baselines::BaselineBackend>(baselines::BaselineKind::kMajority,
                                                          baselines::NamePool::majority_default());
    }
  }
  if (scheme == "mock") {
    auto [name, arg] = split_once(rest);
    if (name == "oracle" || name == "echo_title") return std::make_shared<mocks::OracleBackend>();
    if (name == "list" || name == "constant" || name == "fill") return std::make_shared<mocks::ListBackend>(split_bar(arg));
    if (name == "ranked") return std::make_shared<mocks::RankedOracleBackend>(to_count(arg, 5));
    if (name == "clue") {
      return arg.empty() ? std::make_shared<mocks::ClueBackend>()
                         : std::make_shared<mocks::ClueBackend>(std::string(arg));
    }
    if (name == "lead") return std::make_shared<mocks::LeadSentencesBackend>(to_count(arg, 2));
    if (name == "linker") {
      std::set<std::string> names;
      for (auto& n : baselines::parse_lines(builtin::gazetteer())) names.insert(std::move(n));
      return std::make_shared<mocks::ContextLinkerBackend>(std::move(names));
    }
  }
  throw Error(ErrorCode::kUnknownBackend, "no backend for locator '" + spec.endpoint + "'");
}

std::shared_ptr<const Embedder> make_embedder(std::string_view locator, const std::string& model,
                                              const std::string& auth_env) {
  if (is_url(locator)) {
    return std::make_shared<http::HttpEmbedder>(std::string(locator), model,
                                                http::ClientOptions{auth_env});
  }
  auto [scheme, rest] = split_once(locator);
  auto [name, arg] = split_once(rest);
  if (scheme == "mock" && name == "hash") {
    return std::make_shared<mocks::HashingEmbedder>(to_count(arg, 256));
  }
  throw Error(ErrorCode::kUnknownBackend, "no embedder for locator '" + std::string(locator) + "'");
}

std::shared_ptr<const masking::TextTransformProvider> make_paraphraser(
    std::string_view locator, masking::ParaphraseParams params, const std::string& auth_env) {
  if (is_url(locator)) {
    return std::make_shared<http::HttpParaphraser>(std::string(locator), params,
                                                   http::ClientOptions{auth_env});
  }
  if (locator == "identity") return std::make_shared<masking::IdentityProvider>();
  if (locator == "mock:wrap") return std::make_shared<masking::WrapProvider>("P(", ")");
  throw Error(ErrorCode::kUnknownBackend, "no paraphraser for locator '" + std::string(locator) + "'");
}

BackendRegistry BackendRegistry::with_builtins() {
  BackendRegistry r;
  for (const auto& t : templates::builtin()) r.add_template(t);
  return r;
}

void BackendRegistry::add(BackendSpec spec, std::shared_ptr<const Backend> backend) {
  spec.validate();
  auto id = spec.id;
  backends_.insert_or_assign(std::move(id), RegisteredBackend{std::move(spec), std::move(backend)});
}

void BackendRegistry::add(BackendSpec spec) {
  auto backend = make_backend(spec);
  add(std::move(spec), std::move(backend));
}

void BackendRegistry::add_template(PromptTemplate prompt) {
  auto id = prompt.id;
  templates_.insert_or_assign(std::move(id), std::move(prompt));
}

const RegisteredBackend& BackendRegistry::backend(std::string_view id) const {
  auto it = backends_.find(id);
  if (it == backends_.end()) {
    throw Error(ErrorCode::kUnknownBackend, "backend '" + std::string(id) + "' is not registered");
  }
  return it->second;
}

const PromptTemplate& BackendRegistry::prompt(std::string_view id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) {
    throw Error(ErrorCode::kUnknownBackend, "prompt template '" + std::string(id) + "' is not registered");
  }
  return it->second;
}

bool BackendRegistry::has_backend(std::string_view id) const { return backends_.contains(id); }

const RegisteredBackend& BackendRegistry::resolve(std::string_view id_or_locator) {
  if (auto it = backends_.find(id_or_locator); it != backends_.end()) return it->second;
  BackendSpec spec;
  spec.id = std::string(id_or_locator);
  spec.endpoint = spec.id;
  if (id_or_locator.starts_with("mock:fill")) spec.task = Task::kFillMask;
  add(spec);
  return backends_.find(id_or_locator)->second;
}

void BackendRegistry::load_config(const nlohmann::json& config) {
  static constexpr std::string_view kSecretKeys[] = {"api_key", "apikey", "token", "secret",
                                                     "password", "authorization"};
  try {
    for (const auto& b : config.value("backends", nlohmann::json::array())) {
      for (auto key : kSecretKeys) {
        if (b.contains(std::string(key))) {
          throw Error(ErrorCode::kInvalidArgument,
                      "backend config must not hold secrets ('" + std::string(key) +
                          "'); name an environment variable in auth_env instead");
        }
      }
      BackendSpec spec;
      spec.id = b.at("id").get<std::string>();
      spec.task = parse_task(b.value("task", "generation"));
      spec.endpoint = b.at("endpoint").get<std::string>();
      spec.model = b.value("model", "");
      spec.max_input_chars = b.value("max_input_chars", std::size_t{1000});
      spec.decoding = DecodingSpec::parse(b.value("decoding", "beam:5"), b.value("temperature", 1.0));
      spec.top_n = b.value("top_n", std::size_t{5});
      spec.auth_env = b.value("auth_env", "");
      spec.parallelism = b.value("parallelism", std::size_t{4});
      add(std::move(spec));
    }
    for (const auto& t : config.value("templates", nlohmann::json::array())) {
      add_template(PromptTemplate{t.at("id").get<std::string>(), t.value("prefix", ""),
                                  t.value("suffix", ""),
                                  t.value("mask_placeholder", std::string(kDefaultMaskToken))});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("backend config: ") + e.what());
  }
}

}  // namespace reident
