// Copyright 2026 The wraleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// OpenAI-compatible HTTP transport for chat completions and embeddings.
#include <httplib.h>

#include <nlohmann/json.hpp>

#include "wraleak/backend.h"
#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {

using nlohmann::json;

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path before the API route, no trailing slash
};

Endpoint split_endpoint(const std::string& base_url) {
  const auto scheme = base_url.find("://");
  if (scheme == std::string::npos) throw ArgumentError("endpoint needs a scheme: " + base_url);
  const auto slash = base_url.find('/', scheme + 3);
  Endpoint ep;
  ep.origin = base_url.substr(0, slash);
  ep.prefix = slash == std::string::npos ? "" : base_url.substr(slash);
  while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
  return ep;
}

// Extracts the provider's own message from an error body when present.
std::string provider_message(const std::string& body) {
  try {
    const json j = json::parse(body);
    if (j.contains("error")) {
      const auto& e = j["error"];
      if (e.is_object() && e.contains("message")) return e["message"].get<std::string>();
      if (e.is_string()) return e.get<std::string>();
    }
  } catch (const json::exception&) {
  }
  return std::string(trim(body)).substr(0, 500);
}

json post_json(const Endpoint& ep, const std::string& route, const std::string& api_key,
               std::chrono::milliseconds timeout, const json& body) {
  httplib::Client cli(ep.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

  const auto res = cli.Post(ep.prefix + route, headers, body.dump(), "application/json");
  if (!res) {
    // Timeouts and connection failures are worth retrying.
    throw TransportError("http: " + httplib::to_string(res.error()), true);
  }
  if (res->status < 200 || res->status >= 300) {
    const bool transient = res->status == 429 || res->status >= 500;
    throw TransportError("http " + std::to_string(res->status) + ": " +
                             provider_message(res->body),
                         transient);
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw TransportError(std::string("http: malformed response body: ") + e.what(), false);
  }
}

}  // namespace

HttpChatProvider::HttpChatProvider(std::string base_url, std::string api_key,
                                   std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), timeout_(timeout) {
  split_endpoint(base_url_);
}

std::string HttpChatProvider::send(const ChatRequest& req) {
  json messages = json::array();
  if (req.system_text) messages.push_back({{"role", "system"}, {"content", *req.system_text}});
  messages.push_back({{"role", "user"}, {"content", req.user_text}});
  const json body = {{"model", req.model_name},
                     {"messages", messages},
                     {"temperature", req.temperature},
                     {"max_tokens", req.max_output_tokens}};
  const json reply = post_json(split_endpoint(base_url_), "/chat/completions", api_key_, timeout_,
                               body);
  try {
    const auto& content = reply.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("http: unexpected completion shape: ") + e.what(), false);
  }
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string base_url, std::string api_key,
                                             std::string model, std::size_t dimension,
                                             std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)),
      api_key_(std::move(api_key)),
      model_(std::move(model)),
      dimension_(dimension),
      timeout_(timeout) {
  split_endpoint(base_url_);
}

EmbeddingVector HttpEmbeddingProvider::embed(std::string_view text) {
  if (trim(text).empty()) throw ArgumentError("cannot embed empty text");
  const json body = {{"model", model_}, {"input", std::string(text)}};
  const json reply = post_json(split_endpoint(base_url_), "/embeddings", api_key_, timeout_, body);
  std::vector<double> values;
  try {
    values = reply.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("http: unexpected embedding shape: ") + e.what(), false);
  }
  if (values.size() != dimension_) {
    throw TransportError("http: embedding has dimension " + std::to_string(values.size()) +
                             ", expected " + std::to_string(dimension_),
                         false);
  }
  return EmbeddingVector(std::move(values));
}

}  // namespace wraleak
