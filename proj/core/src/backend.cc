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
#include "wraleak/backend.h"

#include <cstdlib>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "wraleak/digest.h"
#include "wraleak/error.h"
#include "wraleak/synthetic_responder.h"
#include "wraleak/text_util.h"

namespace wraleak {

using nlohmann::json;

namespace {

constexpr std::pair<Role, std::string_view> kRoleNames[] = {
    {Role::kRecovery, "recovery"}, {Role::kJudge, "judge"},     {Role::kAbstractor, "abstractor"},
    {Role::kDecoy, "decoy"},       {Role::kRewrite, "rewrite"}, {Role::kUtility, "utility"},
    {Role::kTrait, "trait"},       {Role::kPersona, "persona"},
};

}  // namespace

std::string_view to_string(Role r) {
  for (const auto& [role, name] : kRoleNames) {
    if (role == r) return name;
  }
  return "recovery";
}

Role parse_role(std::string_view s) {
  const std::string t = to_lower(trim(s));
  for (const auto& [role, name] : kRoleNames) {
    if (name == t) return role;
  }
  throw ArgumentError("unknown role '" + std::string(s) + "'");
}

double default_temperature(Role r) {
  switch (r) {
    case Role::kDecoy:
    case Role::kRewrite:
    case Role::kPersona:
      return 0.7;
    default:
      return 0.0;
  }
}

ChatRequest ChatRequest::for_role(Role role, std::string user_text) {
  ChatRequest req;
  req.role = role;
  req.user_text = std::move(user_text);
  req.temperature = default_temperature(role);
  return req;
}

std::string request_digest(const ChatRequest& req) {
  // Object keys serialize sorted, so the dump is canonical.
  json j = {{"role", to_string(req.role)},
            {"model", req.model_name},
            {"system", req.system_text ? json(*req.system_text) : json(nullptr)},
            {"user", req.user_text},
            {"temperature", format_fixed(req.temperature, 4)},
            {"max_output_tokens", req.max_output_tokens}};
  return sha256_hex(j.dump());
}

void MockChatProvider::add_fixture(std::string digest, std::string reply) {
  std::lock_guard lock(mu_);
  fixtures_[std::move(digest)] = std::move(reply);
}

void MockChatProvider::load_fixtures(const std::filesystem::path& path) {
  const auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      add_fixture(j.at("digest").get<std::string>(), j.at("reply").get<std::string>());
    } catch (const std::exception& ex) {
      const int line_no = static_cast<int>(i + 1);
      throw ParseError(path.string() + ": line " + std::to_string(line_no) + ": " + ex.what(),
                       std::string(line), line_no);
    }
  }
}

std::string MockChatProvider::send(const ChatRequest& req) {
  {
    std::lock_guard lock(mu_);
    const auto it = fixtures_.find(request_digest(req));
    if (it != fixtures_.end()) return it->second;
  }
  if (responder_) return responder_(req);
  throw TransportError("mock: no fixture for request " + request_digest(req).substr(0, 16),
                       false);
}

AuditLog::AuditLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_->has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path_->parent_path(), ec);
  }
}

void AuditLog::record(const AuditEntry& entry) {
  std::lock_guard lock(mu_);
  entries_.push_back(entry);
  if (!path_) return;
  json j = {{"digest", entry.digest},
            {"role", to_string(entry.role)},
            {"model", entry.model_name},
            {"latency_ms", entry.latency_ms},
            {"outcome", entry.outcome},
            {"attempts", entry.attempts}};
  if (!entry.error.empty()) j["error"] = entry.error;
  std::ofstream out(*path_, std::ios::app);
  if (!out) throw IoError("cannot append audit log " + path_->string());
  out << j.dump() << '\n';
}

std::vector<AuditEntry> AuditLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t AuditLog::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

Backend::Backend(std::shared_ptr<ChatProvider> chat, std::shared_ptr<EmbeddingProvider> embedder,
                 BackendOptions options)
    : chat_(std::move(chat)), embedder_(std::move(embedder)), options_(std::move(options)) {
  if (!chat_) throw ArgumentError("backend needs a chat provider");
  if (!embedder_) throw ArgumentError("backend needs an embedding provider");
  if (options_.max_in_flight == 0) throw ArgumentError("max_in_flight must be >= 1");
  if (options_.retry.max_attempts < 1) throw ArgumentError("retry.max_attempts must be >= 1");
  if (!options_.sleeper) {
    options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  slots_ = std::make_unique<std::counting_semaphore<>>(
      static_cast<std::ptrdiff_t>(options_.max_in_flight));
}

ChatRequest Backend::resolve(ChatRequest req) const {
  if (req.model_name.empty()) {
    const auto it = options_.models.find(req.role);
    req.model_name = it != options_.models.end() ? it->second : options_.default_model;
  }
  return req;
}

namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

}  // namespace

Completion Backend::complete(ChatRequest req) {
  if (trim(req.user_text).empty()) throw ArgumentError("user_text must be non-empty");
  if (req.temperature < 0.0) throw ArgumentError("temperature must be >= 0");
  if (req.max_output_tokens <= 0) throw ArgumentError("max_output_tokens must be > 0");
  req = resolve(std::move(req));

  AuditEntry entry;
  entry.digest = request_digest(req);
  entry.role = req.role;
  entry.model_name = req.model_name;
  const auto audit = [&](std::string outcome, std::string error) {
    entry.outcome = std::move(outcome);
    entry.error = std::move(error);
    if (options_.audit) options_.audit->record(entry);
  };

  SlotGuard slot(*slots_);
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };
  auto backoff = options_.retry.initial_backoff;
  std::string reply;
  for (int attempt = 1;; ++attempt) {
    entry.attempts = attempt;
    try {
      reply = chat_->send(req);
      break;
    } catch (const TransportError& e) {
      if (!e.transient() || attempt >= options_.retry.max_attempts) {
        entry.latency_ms = elapsed();
        audit("transport_error", e.what());
        if (e.transient()) {
          throw TransportError("retry budget exhausted after " + std::to_string(attempt) +
                                   " attempts: " + e.what(),
                               true);
        }
        throw;
      }
    }
    options_.sleeper(backoff);
    backoff = std::chrono::milliseconds(
        static_cast<long long>(static_cast<double>(backoff.count()) * options_.retry.multiplier));
  }
  entry.latency_ms = elapsed();
  if (trim(reply).empty()) {
    audit("empty_response", "");
    throw EmptyResponseError("empty reply for role " + std::string(to_string(req.role)));
  }
  audit("ok", "");
  return Completion{std::move(reply), entry.digest};
}

EmbeddingVector Backend::embed(std::string_view text) {
  if (trim(text).empty()) throw ArgumentError("cannot embed empty text");
  const std::string key(text);
  {
    std::lock_guard lock(cache_mu_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  EmbeddingVector v = embedder_->embed(text);
  std::lock_guard lock(cache_mu_);
  return cache_.emplace(key, std::move(v)).first->second;
}

ProviderConfig parse_provider_config(std::string_view json_text,
                                     const std::filesystem::path& base_dir) {
  ProviderConfig cfg;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("provider config: ") + e.what(), std::string(json_text));
  }
  const auto rel = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  try {
    cfg.kind = to_lower(j.value("kind", std::string("mock")));
    if (cfg.kind != "mock" && cfg.kind != "live") {
      throw ArgumentError("provider kind must be 'mock' or 'live'");
    }
    cfg.endpoint = j.value("endpoint", std::string());
    cfg.credential_env = j.value("credential_env", std::string());
    if (j.contains("models")) {
      for (const auto& [role, model] : j["models"].items()) {
        cfg.models[parse_role(role)] = model.get<std::string>();
      }
    }
    cfg.default_model = j.value("default_model", cfg.default_model);
    cfg.embedding_model = j.value("embedding_model", std::string());
    cfg.embedding_dimension = j.value("embedding_dimension", cfg.embedding_dimension);
    if (j.contains("mock_fixtures")) cfg.mock_fixtures = rel(j["mock_fixtures"].get<std::string>());
    if (j.contains("audit_log")) cfg.audit_log = rel(j["audit_log"].get<std::string>());
    cfg.max_in_flight = j.value("max_in_flight", cfg.max_in_flight);
    if (j.contains("retry")) {
      const auto& r = j["retry"];
      cfg.retry.max_attempts = r.value("max_attempts", cfg.retry.max_attempts);
      cfg.retry.initial_backoff = std::chrono::milliseconds(
          r.value("initial_backoff_ms", static_cast<long long>(cfg.retry.initial_backoff.count())));
      cfg.retry.multiplier = r.value("multiplier", cfg.retry.multiplier);
    }
    cfg.timeout = std::chrono::milliseconds(
        j.value("timeout_ms", static_cast<long long>(cfg.timeout.count())));
  } catch (const json::exception& e) {
    throw ParseError(std::string("provider config: ") + e.what(), std::string(json_text));
  }
  if (cfg.kind == "live" && cfg.endpoint.empty()) {
    throw ArgumentError("live provider needs an endpoint");
  }
  if (cfg.embedding_dimension == 0) throw ArgumentError("embedding_dimension must be > 0");
  return cfg;
}

ProviderConfig load_provider_config(const std::filesystem::path& path) {
  return parse_provider_config(read_file(path), path.parent_path());
}

std::unique_ptr<Backend> make_backend(const ProviderConfig& cfg) {
  BackendOptions opts;
  opts.models = cfg.models;
  opts.default_model = cfg.default_model;
  opts.retry = cfg.retry;
  opts.max_in_flight = cfg.max_in_flight;
  if (cfg.audit_log) opts.audit = std::make_shared<AuditLog>(*cfg.audit_log);
  else opts.audit = std::make_shared<AuditLog>();

  if (cfg.kind == "mock") {
    auto mock = std::make_shared<MockChatProvider>(synthetic_reply);
    if (cfg.mock_fixtures) mock->load_fixtures(*cfg.mock_fixtures);
    return std::make_unique<Backend>(
        mock, std::make_shared<HashEmbeddingProvider>(cfg.embedding_dimension), std::move(opts));
  }

  std::string key;
  if (!cfg.credential_env.empty()) {
    const char* v = std::getenv(cfg.credential_env.c_str());
    if (v == nullptr || *v == '\0') {
      throw ArgumentError("credential variable " + cfg.credential_env + " is not set");
    }
    key = v;
  }
  auto chat = std::make_shared<HttpChatProvider>(cfg.endpoint, key, cfg.timeout);
  std::shared_ptr<EmbeddingProvider> embedder;
  if (cfg.embedding_model.empty()) {
    embedder = std::make_shared<HashEmbeddingProvider>(cfg.embedding_dimension);
  } else {
    embedder = std::make_shared<HttpEmbeddingProvider>(cfg.endpoint, key, cfg.embedding_model,
                                                       cfg.embedding_dimension, cfg.timeout);
  }
  return std::make_unique<Backend>(std::move(chat), std::move(embedder), std::move(opts));
}

}  // namespace wraleak
