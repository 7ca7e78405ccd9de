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

#include <set>

#include "test_paths.h"
#include "wraleak/error.h"
#include "wraleak/harness.h"
#include "wraleak/text_util.h"

namespace wraleak {
namespace {

std::filesystem::path pr_dir() { return testenv::fixture_dir() / "prompt_recovery"; }
std::filesystem::path tr_dir() { return testenv::fixture_dir() / "traits"; }

std::unique_ptr<Backend> mock_backend() {
  return make_backend(load_provider_config(testenv::fixture_dir() / "provider_mock.json"));
}

TEST(RunConfig, ParseResolvesPathsAndRejectsUnknownKeys) {
  const auto cfg = load_run_config(pr_dir() / "run.json");
  EXPECT_EQ(cfg.task, Task::kPromptRecovery);
  EXPECT_EQ(cfg.icl.shots, 5);
  EXPECT_EQ(cfg.rng_seed, 7u);
  EXPECT_EQ(cfg.icl.rng_seed, 7u);
  EXPECT_EQ(cfg.prompts, pr_dir() / "prompts.jsonl");
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_THROW(parse_run_config(R"({"task": "recover", "promtps": "x"})"), ArgumentError);
  EXPECT_THROW(parse_run_config(R"({"task": "recover", "icl": {"shot": 3}})"), ArgumentError);
  EXPECT_THROW(parse_run_config(R"({"task": "guess"})"), ArgumentError);
  EXPECT_THROW(parse_run_config("{"), ParseError);
}

TEST(RunConfig, DigestIgnoresPathsButNotSettings) {
  auto a = load_run_config(pr_dir() / "run.json");
  auto b = a;
  b.prompts = "/elsewhere/prompts.jsonl";
  EXPECT_EQ(a.digest(), b.digest());
  b.icl.shots = 3;
  EXPECT_NE(a.digest(), b.digest());
}

TEST(RunConfig, ValidateCatchesMissingInputs) {
  auto cfg = load_run_config(pr_dir() / "run.json");
  cfg.traces = pr_dir() / "missing";
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = load_run_config(pr_dir() / "run.json");
  cfg.max_items = 0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

class RecoveryRunTest : public ::testing::Test {
 protected:
  void SetUp() override {
    cfg = load_run_config(pr_dir() / "run.json");
    data = load_prompt_recovery_data(cfg);
  }
  RunConfig cfg;
  PromptRecoveryData data;
};

TEST_F(RecoveryRunTest, TwentyRowsDeterministic) {
  auto b1 = mock_backend();
  auto b2 = mock_backend();
  const auto r1 = run_prompt_recovery(cfg, data, *b1);
  const auto r2 = run_prompt_recovery(cfg, data, *b2);
  EXPECT_EQ(r1.scorecard.rows.size(), 20u);
  EXPECT_EQ(r1.recovered.size(), 20u);
  EXPECT_EQ(serialize_scorecard(r1.scorecard), serialize_scorecard(r2.scorecard));
  EXPECT_FALSE(r1.scorecard.failed);
  EXPECT_TRUE(aggregate_consistent(r1.scorecard));
  for (const auto& row : r1.scorecard.rows) {
    ASSERT_TRUE(row.ok) << row.item_id << ": " << row.error;
    for (const auto& [k, v] : row.metrics) {
      EXPECT_GE(v, -1.0 - 1e-9) << k;
      EXPECT_LE(v, 1.0 + 1e-9) << k;
    }
    EXPECT_EQ(row.fields.at("config_digest"), cfg.digest());
  }
}

TEST_F(RecoveryRunTest, EmptyAfterFilteringIsAnErrorRow) {
  cfg.max_items = 2;
  cfg.judge_metric = false;
  cfg.obels_metric = false;
  // Drop everything but the noise domains from the first test trace.
  for (auto& t : data.traces) {
    if (t.prompt_id() != "te00") continue;
    std::vector<TraceEvent> noise;
    for (const auto& e : t.events()) {
      if (e.payload_bytes < data.filter.min_payload_bytes) noise.push_back(e);
    }
    ASSERT_FALSE(noise.empty());
    t = t.with_events(noise);
  }
  auto backend = mock_backend();
  const auto run = run_prompt_recovery(cfg, data, *backend);
  ASSERT_EQ(run.scorecard.rows.size(), 2u);
  const auto& bad = run.scorecard.rows[0];
  EXPECT_EQ(bad.item_id, "te00");
  EXPECT_FALSE(bad.ok);
  EXPECT_NE(bad.error.find("empty after filtering"), std::string::npos);
  EXPECT_TRUE(run.scorecard.rows[1].ok);
  EXPECT_FALSE(run.scorecard.failed);
  EXPECT_EQ(run.scorecard.aggregate.at("n_error"), 1.0);
}

TEST_F(RecoveryRunTest, MajorityFailuresMarkRunFailed) {
  cfg.max_items = 3;
  auto chat = std::make_shared<MockChatProvider>([](const ChatRequest&) -> std::string {
    throw TransportError("down", false);
  });
  Backend backend(chat, std::make_shared<HashEmbeddingProvider>());
  const auto run = run_prompt_recovery(cfg, data, backend);
  EXPECT_TRUE(run.scorecard.failed);
  EXPECT_EQ(run.scorecard.aggregate.at("n_ok"), 0.0);
}

TEST_F(RecoveryRunTest, DefenseDilutesObservedTrace) {
  cfg.judge_metric = false;
  cfg.obels_metric = false;
  auto b0 = mock_backend();
  const auto base = run_prompt_recovery(cfg, data, *b0);
  DefenseConfig d;
  d.decoy_count = 5;
  d.rng_seed = cfg.rng_seed;
  cfg.defense = d;
  auto b1 = mock_backend();
  const auto defended = run_prompt_recovery(cfg, data, *b1);
  ASSERT_EQ(defended.scorecard.rows.size(), base.scorecard.rows.size());
  for (std::size_t i = 0; i < base.scorecard.rows.size(); ++i) {
    EXPECT_GT(std::stoul(defended.scorecard.rows[i].fields.at("events")),
              std::stoul(base.scorecard.rows[i].fields.at("events")));
  }
  EXPECT_NE(defended.scorecard.rows[0].fields.at("defense_digest"), "");
}

TEST_F(RecoveryRunTest, ArtifactsWritten) {
  cfg.max_items = 2;
  auto backend = mock_backend();
  const auto run = run_prompt_recovery(cfg, data, *backend);
  const auto dir = testenv::scratch_dir("harness_artifacts");
  write_run_artifacts(run, dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "recovered.jsonl"));
  EXPECT_EQ(serialize_scorecard(read_scorecard(dir / "scorecard.jsonl")), serialize_scorecard(run.scorecard));
}

TEST(DrRewrite, KeepsIdAndMarksVariant) {
  auto backend = mock_backend();
  const PromptRecord p{"tr01", "Find cheap flights from Boston to Lisbon in May", PromptDataset::kSynthetic,
                       PromptVariant::kOriginal, Split::kTrain};
  const auto r = rewrite_dr_variant(p, *backend);
  EXPECT_EQ(r.id, p.id);
  EXPECT_EQ(r.variant, PromptVariant::kDrRewritten);
  EXPECT_FALSE(r.text.empty());
  auto dr = r;
  EXPECT_THROW(rewrite_dr_variant(dr, *backend), ArgumentError);
  EXPECT_NE(build_rewrite_request(p.text).user_text.find(p.text), std::string::npos);
}

TEST(PersonaQueries, ParseValidatesStructure) {
  std::string reply = "User prompt:\n";
  for (int s = 1; s <= 7; ++s) {
    reply += "Session " + std::to_string(s) + ":\n";
    for (int q = 1; q <= 3; ++q) reply += std::to_string(q) + ". query " + std::to_string(s * 10 + q) + "\n";
  }
  const auto sessions = parse_persona_queries(reply);
  ASSERT_EQ(sessions.size(), 7u);
  EXPECT_EQ(sessions[6][2], "query 73");
  EXPECT_THROW(parse_persona_queries("Session 1:\n- a\n- b\n- c\n"), StructureError);
  std::string short_session = reply;
  short_session.replace(short_session.find("3. query 13\n"), 12, "");
  EXPECT_THROW(parse_persona_queries(short_session), StructureError);

  auto backend = mock_backend();
  const auto people = load_persona_file(tr_dir() / "personas.jsonl");
  const auto generated = generate_persona_queries(people.front(), *backend);
  EXPECT_EQ(generated.size(), kPersonaSessions);
  const auto req = build_persona_query_request(people.front());
  EXPECT_EQ(req.role, Role::kPersona);
}

class TraitRunTest : public ::testing::Test {
 protected:
  TraitInferenceRun run(const std::string& file) {
    cfg = load_run_config(tr_dir() / file);
    const auto data = load_trait_inference_data(cfg);
    auto backend = mock_backend();
    return run_trait_inference(cfg, data, *backend);
  }
  RunConfig cfg;
};

TEST_F(TraitRunTest, SessionLimitIsRecorded) {
  const auto r3 = run("run_3.json");
  const auto r7 = run("run_7.json");
  ASSERT_FALSE(r3.predictions.empty());
  EXPECT_EQ(r3.predictions.size(), r7.predictions.size());
  for (const auto& p : r3.predictions) EXPECT_EQ(p.sessions_used, 3u);
  for (const auto& p : r7.predictions) EXPECT_EQ(p.sessions_used, 7u);
  EXPECT_TRUE(aggregate_consistent(r3.scorecard));
  EXPECT_TRUE(r3.scorecard.aggregate.count("category:demographic:mean"));
}

TEST_F(TraitRunTest, ConflictDefenseRecordsPersona) {
  const auto r = run("run_conflict.json");
  ASSERT_FALSE(r.predictions.empty());
  for (const auto& p : r.predictions) {
    ASSERT_TRUE(p.conflicting_persona.has_value());
    EXPECT_NE(*p.conflicting_persona, p.persona_id);
  }
  for (const auto& row : r.scorecard.rows) {
    if (row.ok) EXPECT_FALSE(row.fields.at("conflicting_persona").empty());
  }
}

TEST_F(TraitRunTest, NoTestPersonasIsAnError) {
  cfg = load_run_config(tr_dir() / "run_3.json");
  auto data = load_trait_inference_data(cfg);
  std::erase_if(data.personas, [](const PersonaProfile& p) { return p.split != "icl"; });
  auto backend = mock_backend();
  EXPECT_THROW(run_trait_inference(cfg, data, *backend), ArgumentError);
}

}  // namespace
}  // namespace wraleak
