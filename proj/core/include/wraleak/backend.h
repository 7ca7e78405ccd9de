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
#ifndef WRALEAK_BACKEND_H_
#define WRALEAK_BACKEND_H_

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wraleak/embedding.h"

namespace wraleak {

// Every LLM call the toolkit makes is tagged with the role it plays; the
// provider configuration maps roles to model names.
enum class Role {
  kRecovery,    // prompt-recovery inference
  kJudge,       // LLM-as-judge and OBELS scoring
  kAbstractor,  // OBELS triplet abstraction
  kDecoy,       // decoy prompt generation
  kRewrite,     // DR rewriting and contrastive negatives
  kUtility,     // report utility scoring
  kTrait,       // trait inference
  kPersona,     // persona query generation
};

std::string_view to_string(Role r);
Role parse_role(std::string_view s);
// 0.0 for inference and scoring roles, 0.7 for generation roles.
double default_temperature(Role r);

struct ChatRequest {
  Role role = Role::kRecovery;
  std::string model_name;  // filled from the role map when empty
  std::optional<std::string> system_text;
  std::string user_text;
  double temperature = 0.0;
  int max_output_tokens = 1024;

  static ChatRequest for_role(Role role, std::string user_text);
};

// SHA-256 over a canonical serialization of every request field.
std::string request_digest(const ChatRequest& req);

// Raw transport. Implementations throw TransportError; they must be safe to
// call from several threads.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string send(const ChatRequest& req) = 0;
};

// Replies from a digest-keyed fixture table, then from an optional responder.
// A request with neither raises a non-transient TransportError.
class MockChatProvider : public ChatProvider {
 public:
  using Responder = std::function<std::string(const ChatRequest&)>;

  MockChatProvider() = default;
  explicit MockChatProvider(Responder responder) : responder_(std::move(responder)) {}

  void add_fixture(std::string digest, std::string reply);
  // Line-delimited {"digest": ..., "reply": ...} records.
  void load_fixtures(const std::filesystem::path& path);

  std::string send(const ChatRequest& req) override;

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> fixtures_;
  Responder responder_;
};

// OpenAI-compatible HTTP endpoint (POST {base}/chat/completions).
class HttpChatProvider : public ChatProvider {
 public:
  HttpChatProvider(std::string base_url, std::string api_key,
                   std::chrono::milliseconds timeout = std::chrono::seconds(120));
  std::string send(const ChatRequest& req) override;

 private:
  std::string base_url_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

// OpenAI-compatible embeddings endpoint (POST {base}/embeddings).
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string base_url, std::string api_key, std::string model,
                        std::size_t dimension,
                        std::chrono::milliseconds timeout = std::chrono::seconds(60));
  EmbeddingVector embed(std::string_view text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  std::string base_url_;
  std::string api_key_;
  std::string model_;
  std::size_t dimension_;
  std::chrono::milliseconds timeout_;
};

struct AuditEntry {
  std::string digest;
  Role role = Role::kRecovery;
  std::string model_name;
  double latency_ms = 0.0;
  std::string outcome;  // "ok", "transport_error", "empty_response"
  int attempts = 0;
  std::string error;
};

// One entry per completed or failed request. Thread-safe; optionally mirrors
// entries to a line-delimited file.
class AuditLog {
 public:
  AuditLog() = default;
  explicit AuditLog(std::filesystem::path path);

  void record(const AuditEntry& entry);
  std::vector<AuditEntry> entries() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::optional<std::filesystem::path> path_;
  std::vector<AuditEntry> entries_;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

struct BackendOptions {
  std::map<Role, std::string> models;
  std::string default_model = "mock";
  RetryPolicy retry;
  std::size_t max_in_flight = 4;
  std::shared_ptr<AuditLog> audit;  // null disables auditing
  // Injection point for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleeper;
};

struct Completion {
  std::string text;
  std::string digest;
};

// Front door for all model traffic: resolves the role's model, bounds
// in-flight requests, retries transient failures with exponential backoff,
// rejects empty replies and writes the audit log.
class Backend {
 public:
  Backend(std::shared_ptr<ChatProvider> chat, std::shared_ptr<EmbeddingProvider> embedder,
          BackendOptions options = {});

  // Throws TransportError once the retry budget is spent (or immediately for
  // non-transient failures) and EmptyResponseError for blank replies.
  Completion complete(ChatRequest req);
  std::string complete_text(ChatRequest req) { return complete(std::move(req)).text; }

  // The request exactly as it would be sent (model resolved).
  ChatRequest resolve(ChatRequest req) const;

  // Cached, thread-safe embedding.
  EmbeddingVector embed(std::string_view text);
  EmbeddingProvider& embedder() { return *embedder_; }

  std::size_t max_in_flight() const { return options_.max_in_flight; }
  const std::shared_ptr<AuditLog>& audit() const { return options_.audit; }

 private:
  std::shared_ptr<ChatProvider> chat_;
  std::shared_ptr<EmbeddingProvider> embedder_;
  BackendOptions options_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
  std::mutex cache_mu_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
};

// Adapter so code written against EmbeddingProvider can use the backend cache.
class BackendEmbedder : public EmbeddingProvider {
 public:
  explicit BackendEmbedder(Backend& backend) : backend_(backend) {}
  EmbeddingVector embed(std::string_view text) override { return backend_.embed(text); }
  std::size_t dimension() const override { return backend_.embedder().dimension(); }

 private:
  Backend& backend_;
};

// Provider configuration file (JSON):
//   {"kind": "mock"|"live", "endpoint": "https://...", "credential_env": "OPENAI_API_KEY",
//    "models": {"recovery": "...", "judge": "...", ...}, "default_model": "...",
//    "embedding_model": "...", "embedding_dimension": 384,
//    "mock_fixtures": "path", "audit_log": "path", "max_in_flight": 4,
//    "retry": {"max_attempts": 3, "initial_backoff_ms": 500, "multiplier": 2.0},
//    "timeout_ms": 120000}
struct ProviderConfig {
  std::string kind = "mock";
  std::string endpoint;
  std::string credential_env;
  std::map<Role, std::string> models;
  std::string default_model = "mock";
  std::string embedding_model;
  std::size_t embedding_dimension = HashEmbeddingProvider::kDefaultDimension;
  std::optional<std::filesystem::path> mock_fixtures;
  std::optional<std::filesystem::path> audit_log;
  std::size_t max_in_flight = 4;
  RetryPolicy retry;
  std::chrono::milliseconds timeout{120000};
};

ProviderConfig parse_provider_config(std::string_view json_text,
                                     const std::filesystem::path& base_dir = {});
ProviderConfig load_provider_config(const std::filesystem::path& path);

// Mock kind: fixtures first, then the offline SyntheticResponder, with the
// hash embedder. Live kind: HTTP chat, plus HTTP embeddings when
// embedding_model is set (hash embedder otherwise); the credential is read
// from the named environment variable.
std::unique_ptr<Backend> make_backend(const ProviderConfig& cfg);

}  // namespace wraleak

#endif  // WRALEAK_BACKEND_H_
