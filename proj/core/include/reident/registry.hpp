// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Locator-based construction of backends, embedders and paraphrasers, and
// the registry the harness resolves backend/template ids against.
//
// Backend locators:
//   mock:oracle | mock:echo_title    hidden target's name
//   mock:list:<A>|<B>|...            fixed ranked answers
//   mock:fill:<A>|<B>|...            the same, registered as a fill-mask task
//   mock:ranked[:<depth>]            target at an id-derived rank among fillers
//   mock:clue[:<marker>]             target only if the marker is visible
//   mock:lead[:<sentences>]          leading sentences (summarizer)
//   mock:linker                      context-only multi-hop reader
//   baseline:random | baseline:majority
//   http://... | https://...         remote endpoint (see http.hpp)
// Embedder locators: mock:hash[:<dim>], http(s) URL.
// Paraphraser locators: identity, mock:wrap, http(s) URL.

#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "reident/backends.hpp"
#include "reident/masking.hpp"

namespace reident {

std::shared_ptr<const Backend> make_backend(const BackendSpec& spec);
std::shared_ptr<const Embedder> make_embedder(std::string_view locator,
                                              const std::string& model = {},
                                              const std::string& auth_env = {});
std::shared_ptr<const masking::TextTransformProvider> make_paraphraser(
    std::string_view locator, masking::ParaphraseParams params = {},
    const std::string& auth_env = {});

struct RegisteredBackend {
  BackendSpec spec;
  std::shared_ptr<const Backend> backend;
};

class BackendRegistry {
 public:
  /// Registry preloaded with the bundled prompt templates.
  static BackendRegistry with_builtins();

  void add(BackendSpec spec, std::shared_ptr<const Backend> backend);
  void add(BackendSpec spec);
  void add_template(PromptTemplate prompt);

  /// Throws UnknownBackend.
  const RegisteredBackend& backend(std::string_view id) const;
  const PromptTemplate& prompt(std::string_view id) const;
  bool has_backend(std::string_view id) const;

  /// Returns the backend registered under `id_or_locator`, registering a
  /// fresh one built from the locator when the id is unknown.
  const RegisteredBackend& resolve(std::string_view id_or_locator);

  /// {"backends": [...], "templates": [...]}; see README for keys. Throws
  /// InvalidArgument for inline secrets ("api_key", "token", ...).
  void load_config(const nlohmann::json& config);

 private:
  std::map<std::string, RegisteredBackend, std::less<>> backends_;
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

}  // namespace reident
