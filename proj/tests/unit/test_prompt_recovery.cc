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
#include <set>

#include "template_inputs.h"
#include "test_paths.h"
#include "wraleak/error.h"
#include "wraleak/prompt_recovery.h"
#include "wraleak/text_util.h"

namespace wraleak {
namespace {

DomainTrace small_trace(const std::string& sid, std::optional<std::string> pid,
                        std::vector<std::string> domains) {
  std::vector<TraceEvent> ev;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    ev.push_back(TraceEvent{domains[i], static_cast<std::int64_t>(i) * 10, 4096,
                            i == 0 ? std::optional<std::string>("/search") : std::nullopt});
  }
  return DomainTrace(sid, std::move(ev), std::move(pid));
}

TEST(IclConfig, Validation) {
  IclConfig c;
  EXPECT_NO_THROW(c.validate());
  c.ordering = ExampleOrdering::kAscending;
  EXPECT_THROW(c.validate(), ArgumentError);
  c.selection = SelectionStrategy::kEmbeddingTopK;
  EXPECT_NO_THROW(c.validate());
  c.quality_filter_threshold = 0.5;
  EXPECT_THROW(c.validate(), ArgumentError);
  c.negatives_per_example = 1;
  EXPECT_NO_THROW(c.validate());
  c.quality_filter_threshold = 1.5;
  EXPECT_THROW(c.validate(), ArgumentError);
  EXPECT_THROW(parse_selection("best"), ArgumentError);
  EXPECT_EQ(parse_visibility("urls"), Visibility::kUrls);
}

TEST(RenderTrace, DomainsUrlsTiming) {
  const auto t = small_trace("s", std::nullopt, {"a.com", "b.org"});
  EXPECT_EQ(render_trace(t, false, Visibility::kDomains), "- a.com\n- b.org");
  EXPECT_EQ(render_trace(t, false, Visibility::kUrls), "- a.com/search\n- b.org");
  EXPECT_EQ(render_trace(t, true, Visibility::kDomains), "- a.com @0ms\n- b.org @10ms");
}

TEST(SelectExamples, ExcludesTargetAndIsDeterministic) {
  const auto train = testenv::fixture_train_pairs();
  ASSERT_GE(train.size(), 10u);
  // A target that shares a prompt id with one training pair.
  const auto& twin = train[3];
  const auto target = small_trace("other", twin.prompt.id, twin.trace.domains());
  IclConfig cfg;
  cfg.shots = static_cast<int>(train.size()) - 1;
  const auto all = select_examples(train, target, cfg, nullptr, 3);
  EXPECT_EQ(all.size(), train.size() - 1);
  for (const auto& ex : all) EXPECT_NE(ex.pair.prompt.id, twin.prompt.id);
  cfg.shots = static_cast<int>(train.size());
  EXPECT_THROW(select_examples(train, target, cfg, nullptr, 3), ArgumentError);

  cfg.shots = 5;
  const auto a = select_examples(train, target, cfg, nullptr, 11);
  const auto b = select_examples(train, target, cfg, nullptr, 11);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].pair.prompt.id, b[i].pair.prompt.id);
  std::set<std::string> ids;
  for (const auto& ex : a) ids.insert(ex.pair.prompt.id);
  EXPECT_EQ(ids.size(), 5u);
}

TEST(SelectExamples, EmbeddingTopKOrdering) {
  const auto train = testenv::fixture_train_pairs();
  const auto target = testenv::fixture_target_trace();
  HashEmbeddingProvider e;
  IclConfig cfg;
  cfg.shots = 4;
  cfg.selection = SelectionStrategy::kEmbeddingTopK;
  cfg.ordering = ExampleOrdering::kDescending;
  const auto desc = select_examples(train, target, cfg, &e, 0);
  ASSERT_EQ(desc.size(), 4u);
  for (std::size_t i = 1; i < desc.size(); ++i) EXPECT_GE(*desc[i - 1].similarity, *desc[i].similarity);
  // Nothing outside the selection beats the weakest selected example.
  std::set<std::string> picked;
  for (const auto& ex : desc) picked.insert(ex.pair.prompt.id);
  const auto tv = e.embed(render_trace(target, false, Visibility::kDomains));
  for (const auto& p : train) {
    if (picked.count(p.prompt.id)) continue;
    EXPECT_LE(cosine_similarity(tv, e.embed(render_trace(p.trace, false, Visibility::kDomains))),
              *desc.back().similarity + 1e-12);
  }
  cfg.ordering = ExampleOrdering::kAscending;
  const auto asc = select_examples(train, target, cfg, &e, 0);
  EXPECT_EQ(asc.front().pair.prompt.id, desc.back().pair.prompt.id);
  EXPECT_THROW(select_examples(train, target, cfg, nullptr, 0), ArgumentError);
}

TEST(BuildPrompt, ShotMarkersAndContrastiveLayout) {
  const auto train = testenv::fixture_train_pairs();
  const auto target = testenv::fixture_target_trace();
  IclConfig cfg;
  cfg.shots = 3;
  auto ex = select_examples(train, target, cfg, nullptr, 1);
  const auto plain = build_recovery_prompt(ex, "- x.com", cfg);
  EXPECT_EQ(count_occurrences(plain.user_text, "Reconstructed Prompt:"), 4u);
  EXPECT_EQ(count_occurrences(plain.user_text, "Example "), 3u);
  EXPECT_TRUE(plain.user_text.ends_with("- x.com\n\nReconstructed Prompt:"));
  for (auto& e : ex) e.negatives = {"something vague", "off topic"};
  const auto con = build_recovery_prompt(ex, "- x.com", cfg);
  EXPECT_EQ(count_occurrences(con.user_text, "Less Preferred Query:"), 6u);
  EXPECT_EQ(count_occurrences(con.user_text, "Reasoning:"), 3u);
  EXPECT_TRUE(con.user_text.ends_with("Preferred Query:"));
  const auto zero = build_recovery_prompt({}, "- x.com", cfg);
  EXPECT_EQ(count_occurrences(zero.user_text, "Example "), 0u);
  EXPECT_THROW(build_recovery_prompt({}, "  ", cfg), ArgumentError);
}

TEST(CleanOutput, StripsLabelsAndQuotes) {
  EXPECT_EQ(clean_model_output("  \"Plan a trip to Kyoto\"  "), "Plan a trip to Kyoto");
  EXPECT_EQ(clean_model_output("Reconstructed Prompt: Find vegan recipes"), "Find vegan recipes");
  EXPECT_EQ(clean_model_output("preferred query:\n'Compare laptops'"), "Compare laptops");
}

TEST(Negatives, ThresholdRetriesAndFallsBack) {
  std::atomic<int> calls{0};
  // First candidate parrots the prompt, second is unrelated.
  auto chat = std::make_shared<MockChatProvider>([&](const ChatRequest&) -> std::string {
    return calls++ == 0 ? "Find cheap flights to Lisbon in May" : "Tell me about gardening";
  });
  Backend backend(chat, std::make_shared<HashEmbeddingProvider>());
  const PromptRecord p{"p1", "Find cheap flights to Lisbon in May"};
  const auto r = generate_negative(p, backend, 0.5, 5);
  EXPECT_EQ(r.attempts, 2);
  EXPECT_TRUE(r.threshold_met);
  EXPECT_LT(*r.similarity, 0.5);
  EXPECT_EQ(r.text, "Tell me about gardening");

  auto parrot = std::make_shared<MockChatProvider>([](const ChatRequest& req) {
    return std::string("Find cheap flights to Lisbon in May");
  });
  Backend b2(parrot, std::make_shared<HashEmbeddingProvider>());
  const auto fail = generate_negative(p, b2, 0.5, 3);
  EXPECT_FALSE(fail.threshold_met);
  EXPECT_EQ(fail.attempts, 3);
  const auto none = generate_negative(p, b2, std::nullopt, 3);
  EXPECT_EQ(none.attempts, 1);
  EXPECT_FALSE(none.similarity.has_value());
}

TEST(RecoverPrompt, EndToEndWithMock) {
  const auto train = testenv::fixture_train_pairs();
  const auto target = testenv::fixture_target_trace();
  std::string seen;
  auto chat = std::make_shared<MockChatProvider>([&](const ChatRequest& r) {
    seen = r.user_text;
    return std::string("Reconstructed Prompt: \"Some guess\"");
  });
  Backend backend(chat, std::make_shared<HashEmbeddingProvider>());
  IclConfig cfg;
  cfg.shots = 2;
  const auto r = recover_prompt(target, train, cfg, backend, 4);
  EXPECT_EQ(r.text, "Some guess");
  EXPECT_EQ(r.example_ids.size(), 2u);
  EXPECT_EQ(r.request_digest.size(), request_digest(ChatRequest{}).size());
  EXPECT_NE(seen.find(render_trace(target, false, Visibility::kDomains)), std::string::npos);
  const auto again = recover_prompt(target, train, cfg, backend, 4);
  EXPECT_EQ(again.request_digest, r.request_digest);

  auto blank = std::make_shared<MockChatProvider>([](const ChatRequest&) { return std::string("\"\""); });
  Backend b2(blank, std::make_shared<HashEmbeddingProvider>());
  EXPECT_THROW(recover_prompt(target, train, cfg, b2), EmptyResponseError);
}

TEST(Finetune, ExportRoundTrip) {
  const auto train = testenv::fixture_train_pairs();
  const auto path = testenv::scratch_dir("finetune") / "ft.jsonl";
  export_finetune_dataset(train, path);
  const auto recs = parse_finetune_dataset(read_file(path));
  ASSERT_EQ(recs.size(), train.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].prompt_text, train[i].prompt.text);
    EXPECT_EQ(recs[i].trace_rendering, render_trace(train[i].trace, false, Visibility::kDomains));
  }
  EXPECT_THROW(parse_finetune_dataset("{\"messages\": []}"), ParseError);
  EXPECT_THROW(export_finetune_dataset({}, path), ArgumentError);
}

}  // namespace
}  // namespace wraleak
