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
#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include "test_paths.h"
#include "wraleak/backend.h"
#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {
namespace {

class FlakyProvider : public ChatProvider {
 public:
  FlakyProvider(int failures, bool transient) : failures_(failures), transient_(transient) {}
  std::string send(const ChatRequest&) override {
    ++calls;
    if (calls <= failures_) throw TransportError("boom", transient_);
    return "fine";
  }
  std::atomic<int> calls{0};

 private:
  int failures_;
  bool transient_;
};

BackendOptions opts_with(std::vector<long long>* sleeps, std::shared_ptr<AuditLog> audit) {
  BackendOptions o;
  o.audit = std::move(audit);
  o.sleeper = [sleeps](std::chrono::milliseconds d) { sleeps->push_back(d.count()); };
  return o;
}

TEST(RequestDigest, StableAndSensitive) {
  auto a = ChatRequest::for_role(Role::kRecovery, "hello");
  auto b = a;
  EXPECT_EQ(request_digest(a), request_digest(b));
  b.user_text = "hello!";
  EXPECT_NE(request_digest(a), request_digest(b));
  b = a;
  b.temperature = 0.5;
  EXPECT_NE(request_digest(a), request_digest(b));
  EXPECT_EQ(parse_role(to_string(Role::kPersona)), Role::kPersona);
  EXPECT_THROW(parse_role("oracle"), ArgumentError);
}

TEST(MockProvider, FixturesWinOverResponder) {
  auto mock = std::make_shared<MockChatProvider>([](const ChatRequest&) { return std::string("responder"); });
  Backend backend(mock, std::make_shared<HashEmbeddingProvider>());
  const auto req = backend.resolve(ChatRequest::for_role(Role::kJudge, "x"));
  mock->add_fixture(request_digest(req), "fixture");
  EXPECT_EQ(backend.complete_text(ChatRequest::for_role(Role::kJudge, "x")), "fixture");
  EXPECT_EQ(backend.complete_text(ChatRequest::for_role(Role::kJudge, "y")), "responder");
}

TEST(MockProvider, NoResponderIsNotRetried) {
  std::vector<long long> sleeps;
  auto audit = std::make_shared<AuditLog>();
  Backend backend(std::make_shared<MockChatProvider>(), std::make_shared<HashEmbeddingProvider>(),
                  opts_with(&sleeps, audit));
  try {
    backend.complete(ChatRequest::for_role(Role::kJudge, "x"));
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_FALSE(e.transient());
  }
  EXPECT_TRUE(sleeps.empty());
  ASSERT_EQ(audit->size(), 1u);
  EXPECT_EQ(audit->entries()[0].outcome, "transport_error");
}

TEST(Backend, TransientFailuresBackOffExponentially) {
  std::vector<long long> sleeps;
  auto audit = std::make_shared<AuditLog>();
  auto flaky = std::make_shared<FlakyProvider>(2, true);
  Backend backend(flaky, std::make_shared<HashEmbeddingProvider>(), opts_with(&sleeps, audit));
  EXPECT_EQ(backend.complete_text(ChatRequest::for_role(Role::kRecovery, "x")), "fine");
  EXPECT_EQ(flaky->calls.load(), 3);
  EXPECT_EQ(sleeps, (std::vector<long long>{500, 1000}));
  ASSERT_EQ(audit->size(), 1u);
  EXPECT_EQ(audit->entries()[0].attempts, 3);
  EXPECT_EQ(audit->entries()[0].outcome, "ok");
}

TEST(Backend, RetryBudgetExhausted) {
  std::vector<long long> sleeps;
  auto audit = std::make_shared<AuditLog>();
  auto flaky = std::make_shared<FlakyProvider>(10, true);
  Backend backend(flaky, std::make_shared<HashEmbeddingProvider>(), opts_with(&sleeps, audit));
  try {
    backend.complete(ChatRequest::for_role(Role::kRecovery, "x"));
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_NE(std::string(e.what()).find("3 attempts"), std::string::npos);
  }
  EXPECT_EQ(flaky->calls.load(), 3);
  EXPECT_EQ(audit->entries()[0].attempts, 3);
}

TEST(Backend, NonTransientFailsImmediately) {
  std::vector<long long> sleeps;
  auto flaky = std::make_shared<FlakyProvider>(1, false);
  Backend backend(flaky, std::make_shared<HashEmbeddingProvider>(), opts_with(&sleeps, nullptr));
  EXPECT_THROW(backend.complete(ChatRequest::for_role(Role::kRecovery, "x")), TransportError);
  EXPECT_EQ(flaky->calls.load(), 1);
  EXPECT_TRUE(sleeps.empty());
}

TEST(Backend, BlankReplyIsEmptyResponse) {
  auto audit = std::make_shared<AuditLog>();
  BackendOptions o;
  o.audit = audit;
  Backend backend(std::make_shared<MockChatProvider>([](const ChatRequest&) { return std::string(" \n"); }),
                  std::make_shared<HashEmbeddingProvider>(), o);
  EXPECT_THROW(backend.complete(ChatRequest::for_role(Role::kRecovery, "x")), EmptyResponseError);
  EXPECT_EQ(audit->entries()[0].outcome, "empty_response");
}

TEST(Backend, MaxInFlightIsRespected) {
  std::atomic<int> live{0};
  std::atomic<int> peak{0};
  auto mock = std::make_shared<MockChatProvider>([&](const ChatRequest&) {
    const int now = ++live;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --live;
    return std::string("ok");
  });
  BackendOptions o;
  o.max_in_flight = 2;
  Backend backend(mock, std::make_shared<HashEmbeddingProvider>(), o);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&backend, i] {
      for (int k = 0; k < 4; ++k) backend.complete(ChatRequest::for_role(Role::kJudge, std::to_string(i * 10 + k)));
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
}

TEST(Backend, ModelResolvedFromRoleMap) {
  BackendOptions o;
  o.models[Role::kJudge] = "judge-model";
  Backend backend(std::make_shared<MockChatProvider>(), std::make_shared<HashEmbeddingProvider>(), o);
  EXPECT_EQ(backend.resolve(ChatRequest::for_role(Role::kJudge, "x")).model_name, "judge-model");
  EXPECT_EQ(backend.resolve(ChatRequest::for_role(Role::kTrait, "x")).model_name, "mock");
}

TEST(Backend, EmbedCacheReturnsSameVector) {
  Backend backend(std::make_shared<MockChatProvider>(), std::make_shared<HashEmbeddingProvider>());
  const auto a = backend.embed("coffee shops in lisbon");
  const auto b = backend.embed("coffee shops in lisbon");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.dimension(), HashEmbeddingProvider::kDefaultDimension);
  EXPECT_THROW(backend.embed(""), ArgumentError);
}

TEST(AuditLogFile, AppendsJsonLines) {
  const auto path = testenv::scratch_dir("audit") / "audit.jsonl";
  {
    AuditLog log(path);
    log.record(AuditEntry{"d1", Role::kJudge, "m", 1.0, "ok", 1, ""});
  }
  {
    AuditLog log(path);
    log.record(AuditEntry{"d2", Role::kJudge, "m", 1.0, "ok", 1, ""});
  }
  std::size_t n = 0;
  for (const auto& line : split_lines(read_file(path))) n += !trim(line).empty();
  EXPECT_EQ(n, 2u);
}

TEST(ProviderConfig, ParseAndDefaults) {
  const auto cfg = parse_provider_config(
      R"({"kind": "mock", "models": {"judge": "j"}, "max_in_flight": 2,
          "retry": {"max_attempts": 4, "initial_backoff_ms": 10, "multiplier": 3}})");
  EXPECT_EQ(cfg.kind, "mock");
  EXPECT_EQ(cfg.models.at(Role::kJudge), "j");
  EXPECT_EQ(cfg.max_in_flight, 2u);
  EXPECT_EQ(cfg.retry.max_attempts, 4);
  EXPECT_EQ(cfg.retry.initial_backoff.count(), 10);
  EXPECT_THROW(parse_provider_config("{\"kind\": \"carrier-pigeon\"}"), ArgumentError);
  EXPECT_THROW(parse_provider_config("{"), ParseError);
  EXPECT_NE(make_backend(cfg), nullptr);
}

TEST(ProviderConfig, LiveNeedsCredential) {
  ::unsetenv("WRALEAK_TEST_MISSING_KEY");
  const auto cfg = parse_provider_config(
      R"({"kind": "live", "endpoint": "http://127.0.0.1:9", "credential_env": "WRALEAK_TEST_MISSING_KEY"})");
  EXPECT_THROW(make_backend(cfg), ArgumentError);
}

}  // namespace
}  // namespace wraleak
