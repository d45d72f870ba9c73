// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/http.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <nlohmann/json.hpp>

#include "reident/error.hpp"

namespace reident::http {

using nlohmann::json;

Url Url::parse(std::string_view url) {
  Url out;
  auto sep = url.find("://");
  if (sep == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "not a URL: '" + std::string(url) + "'");
  }
  out.scheme = std::string(url.substr(0, sep));
  if (out.scheme != "http" && out.scheme != "https") {
    throw Error(ErrorCode::kInvalidArgument, "unsupported URL scheme '" + out.scheme + "'");
  }
  auto rest = url.substr(sep + 3);
  auto slash = rest.find('/');
  auto authority = rest.substr(0, slash);
  out.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    out.host = std::string(authority.substr(0, colon));
    try {
      out.port = std::stoi(std::string(authority.substr(colon + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in '" + std::string(url) + "'");
    }
  } else {
    out.host = std::string(authority);
    out.port = out.scheme == "https" ? 443 : 80;
  }
  if (out.host.empty()) throw Error(ErrorCode::kInvalidArgument, "URL has no host");
  return out;
}

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

std::string bearer_token(const std::string& env_name) {
  if (env_name.empty()) return {};
  const char* value = std::getenv(env_name.c_str());
  return value ? std::string(value) : std::string();
}

std::string post_json(const Url& url, const std::string& body, const ClientOptions& options) {
  httplib::Client client(url.origin());
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);
  client.set_write_timeout(options.timeout);
  httplib::Headers headers;
  if (auto token = bearer_token(options.auth_env); !token.empty()) {
    headers.emplace("Authorization", "Bearer " + token);
  }
  auto res = client.Post(url.path, headers, body, "application/json");
  if (!res) {
    throw Error(ErrorCode::kEndpointUnavailable,
                url.origin() + url.path + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 429) {
    std::chrono::milliseconds wait{1000};
    if (res->has_header("Retry-After")) {
      try {
        wait = std::chrono::seconds(std::stoll(res->get_header_value("Retry-After")));
      } catch (const std::exception&) {
      }
    }
    throw RateLimited(url.origin() + url.path + " rate limited", wait);
  }
  if (res->status >= 500) {
    throw Error(ErrorCode::kEndpointUnavailable,
                url.origin() + url.path + " answered HTTP " + std::to_string(res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::kMalformedResponse,
                url.origin() + url.path + " answered HTTP " + std::to_string(res->status) + ": " +
                    res->body.substr(0, 200));
  }
  return res->body;
}

namespace {

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("response is not JSON: ") + e.what());
  }
}

}  // namespace

HttpBackend::HttpBackend(std::string url, std::string model, ClientOptions options)
    : url_(Url::parse(url)), model_(std::move(model)), options_(std::move(options)) {}

std::string HttpBackend::request_body(const GenerationRequest& request, const std::string& model) {
  if (request.task == Task::kFillMask) {
    return json{{"text", request.prompt}, {"top_k", request.candidates}}.dump();
  }
  json body{
      {"model", model},
      {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.decoding.temperature()},
      {"n", request.candidates},
  };
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Beam>) body["num_beams"] = s.width;
        if constexpr (std::is_same_v<S, TopK>) body["top_k"] = s.k;
        if constexpr (std::is_same_v<S, TopP>) body["top_p"] = s.p;
      },
      request.decoding.strategy());
  return body.dump();
}

std::vector<std::string> HttpBackend::parse_response(Task task, const std::string& body) {
  auto doc = parse_body(body);
  std::vector<std::string> out;
  try {
    if (task == Task::kFillMask) {
      const json& items = doc.is_object() && doc.contains("predictions") ? doc["predictions"] : doc;
      if (!items.is_array()) throw Error(ErrorCode::kMalformedResponse, "fill-mask response is not a list");
      std::vector<std::pair<double, std::string>> ranked;
      for (const auto& item : items) {
        std::string filler = item.contains("token_str") ? item["token_str"].get<std::string>()
                                                        : item.at("sequence").get<std::string>();
        ranked.emplace_back(item.value("score", 0.0), std::move(filler));
      }
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      for (auto& [score, filler] : ranked) out.push_back(std::move(filler));
      return out;
    }
    for (const auto& choice : doc.at("choices")) {
      if (choice.contains("message")) {
        const auto& content = choice["message"].at("content");
        out.push_back(content.is_null() ? std::string() : content.get<std::string>());
      } else {
        out.push_back(choice.at("text").get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("unexpected response shape: ") + e.what());
  }
  return out;
}

GenerationResponse HttpBackend::generate(const GenerationRequest& request) const {
  auto body = post_json(url_, request_body(request, model_), options_);
  GenerationResponse response;
  response.texts = parse_response(request.task, body);
  response.raw = std::move(body);
  return response;
}

HttpEmbedder::HttpEmbedder(std::string url, std::string model, ClientOptions options)
    : url_(Url::parse(url)), model_(std::move(model)), options_(std::move(options)) {}

std::vector<Vector> HttpEmbedder::embed_batch(std::span<const std::string> texts) const {
  json input = json::array();
  for (const auto& t : texts) input.push_back(t);
  auto doc = parse_body(post_json(url_, json{{"model", model_}, {"input", input}}.dump(), options_));
  std::vector<Vector> out(texts.size());
  try {
    const auto& data = doc.at("data");
    for (std::size_t i = 0; i < data.size(); ++i) {
      auto index = data[i].value("index", i);
      if (index >= out.size()) throw Error(ErrorCode::kMalformedResponse, "embedding index out of range");
      out[index] = data[i].at("embedding").get<Vector>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("unexpected embedding response: ") + e.what());
  }
  return out;
}

HttpParaphraser::HttpParaphraser(std::string url, masking::ParaphraseParams params,
                                 ClientOptions options)
    : url_(Url::parse(url)), params_(params), options_(std::move(options)) {}

std::string HttpParaphraser::transform(std::string_view sentence) const {
  json body{{"text", sentence},
            {"num_beams", params_.num_beams},
            {"temperature", params_.temperature}};
  std::string response;
  try {
    response = post_json(url_, body.dump(), options_);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEndpointUnavailable) {
      throw Error(ErrorCode::kProviderUnavailable, e.what());
    }
    throw;
  }
  auto doc = parse_body(response);
  if (doc.contains("text")) return doc["text"].get<std::string>();
  if (doc.contains("paraphrase")) return doc["paraphrase"].get<std::string>();
  throw Error(ErrorCode::kMalformedResponse, "paraphrase response has no text field");
}

}  // namespace reident::http
