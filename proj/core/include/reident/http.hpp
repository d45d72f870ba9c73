// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Remote endpoints.
//
//   generation / qa  POST <url>  chat-completions body:
//                    {"model", "messages":[{"role":"user","content"}],
//                     "temperature", "n", and "num_beams" | "top_k" | "top_p"}
//                    reads choices[i].message.content (or choices[i].text)
//   fill_mask        POST <url>  {"text", "top_k"}
//                    reads [{"token_str"|"sequence", "score"}] or {"predictions": [...]}
//   embeddings       POST <url>  {"model", "input": [..]}
//                    reads data[i].embedding, ordered by data[i].index
//   paraphrase       POST <url>  {"text", "num_beams", "temperature"}
//                    reads {"text"} or {"paraphrase"}
//
// HTTP 429 maps to RateLimited (Retry-After honored), 5xx and transport
// failures to EndpointUnavailable, other non-2xx to MalformedResponse.

#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "reident/backends.hpp"
#include "reident/masking.hpp"

namespace reident::http {

struct Url {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string path;

  /// Throws InvalidArgument for anything but http(s)://host[:port][/path].
  static Url parse(std::string_view url);
  std::string origin() const;
};

struct ClientOptions {
  std::string auth_env;
  std::chrono::seconds timeout{60};
};

/// Reads the bearer token from the named environment variable; empty when
/// unset. Secrets never come from flags or config files.
std::string bearer_token(const std::string& env_name);

/// Posts JSON text and returns the body of a 2xx response.
std::string post_json(const Url& url, const std::string& body, const ClientOptions& options);

class HttpBackend final : public Backend {
 public:
  HttpBackend(std::string url, std::string model, ClientOptions options);
  GenerationResponse generate(const GenerationRequest& request) const override;

  static std::string request_body(const GenerationRequest& request, const std::string& model);
  static std::vector<std::string> parse_response(Task task, const std::string& body);

 private:
  Url url_;
  std::string model_;
  ClientOptions options_;
};

class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(std::string url, std::string model, ClientOptions options);
  std::string id() const override { return "http:" + model_ + "@" + url_.origin() + url_.path; }

 protected:
  std::vector<Vector> embed_batch(std::span<const std::string> texts) const override;

 private:
  Url url_;
  std::string model_;
  ClientOptions options_;
};

class HttpParaphraser final : public masking::TextTransformProvider {
 public:
  HttpParaphraser(std::string url, masking::ParaphraseParams params, ClientOptions options);
  std::string id() const override { return "http:" + url_.origin() + url_.path; }
  std::string transform(std::string_view sentence) const override;

 private:
  Url url_;
  masking::ParaphraseParams params_;
  ClientOptions options_;
};

}  // namespace reident::http
