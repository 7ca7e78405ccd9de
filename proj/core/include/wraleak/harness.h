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
#ifndef WRALEAK_HARNESS_H_
#define WRALEAK_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wraleak/backend.h"
#include "wraleak/defense.h"
#include "wraleak/noise_filter.h"
#include "wraleak/persona.h"
#include "wraleak/prompt.h"
#include "wraleak/prompt_recovery.h"
#include "wraleak/scorecard.h"
#include "wraleak/trace.h"
#include "wraleak/trait_inference.h"

namespace wraleak {

enum class Task { kPromptRecovery, kTraitInference };
std::string_view to_string(Task t);
Task parse_task(std::string_view s);

// Run configuration file (JSON); relative paths resolve against the file's
// directory:
//   {"task": "prompt_recovery"|"trait_inference", "label": "...", "seed": 7,
//    "prompts": "prompts.jsonl", "original_prompts": "prompts.jsonl",
//    "traces": "traces/", "personas": "personas.jsonl",
//    "decoy_traces": "dir", "keyword_map": "path", "persona_pool": "path",
//    "blocklist": "path", "min_payload_bytes": 7168, "sessions": 7,
//    "max_items": 20, "metrics": {"judge": true, "obels": true},
//    "icl": {"shots": 5, "selection": "random"|"embedding",
//            "ordering": "random"|"ascending"|"descending",
//            "negatives_per_example": 0, "quality_filter_threshold": 0.5,
//            "include_timing": false, "visibility": "domains"|"urls"},
//    "defense": {"decoy_count": 0, "merge": "interleave"|"shuffle",
//                "visibility": 1.0, "persona_conflict": false},
//    "provider": "provider.json", "out": "out/"}
struct RunConfig {
  Task task = Task::kPromptRecovery;
  std::string label;
  IclConfig icl;
  std::optional<DefenseConfig> defense;
  std::filesystem::path prompts;
  // Scoring targets by id when prompts holds rewritten variants.
  std::optional<std::filesystem::path> original_prompts;
  std::filesystem::path traces;
  std::filesystem::path personas;
  std::optional<std::filesystem::path> decoy_traces;
  std::optional<std::filesystem::path> keyword_map;
  std::optional<std::filesystem::path> persona_pool;
  std::optional<std::filesystem::path> blocklist;
  std::int64_t min_payload_bytes = kDefaultMinPayloadBytes;
  std::optional<std::size_t> sessions_limit;
  std::optional<std::size_t> max_items;
  bool judge_metric = true;
  bool obels_metric = true;
  std::optional<std::filesystem::path> provider;
  std::optional<std::filesystem::path> out_dir;
  std::uint64_t rng_seed = 0;

  // Throws ArgumentError for missing inputs or an unusable output directory.
  void validate() const;
  // Stable digest over the settings that influence results.
  std::string digest() const;
};

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

struct PromptRecoveryData {
  std::vector<PromptRecord> prompts;
  // ORIGINAL text is always the scoring target; looked up here by id when a
  // prompt is a rewritten variant.
  std::vector<PromptRecord> originals;
  std::vector<DomainTrace> traces;    // joined to prompts by prompt_id
  std::vector<DomainTrace> decoy_pool;  // empty: other prompts' traces serve as decoys
  FilterConfig filter = FilterConfig::defaults();
};

struct TraitInferenceData {
  std::vector<PersonaProfile> personas;  // split "icl" (exactly 3) and "test"
  std::vector<MultiSessionTrace> traces;
  std::vector<PersonaProfile> pool;      // conflicting-persona candidates
  std::vector<KeywordRule> keyword_rules;
  FilterConfig filter = FilterConfig::defaults();
};

PromptRecoveryData load_prompt_recovery_data(const RunConfig& cfg);
TraitInferenceData load_trait_inference_data(const RunConfig& cfg);

struct RecoveredPrompt {
  std::string item_id;
  std::string config_digest;
  std::string text;
  std::string request_digest;
};

struct PromptRecoveryRun {
  Scorecard scorecard;
  std::vector<RecoveredPrompt> recovered;
};

// For each test prompt: defense transforms on its trace (when configured),
// noise filtering, recovery, then embedding, judge and OBELS metrics against
// the ORIGINAL text. Item failures become error rows.
PromptRecoveryRun run_prompt_recovery(const RunConfig& cfg, const PromptRecoveryData& data,
                                      Backend& backend);

struct TraitPredictionRecord {
  std::string persona_id;
  std::size_t sessions_used = 0;
  TraitPrediction prediction;
  std::string request_digest;
  std::optional<std::string> conflicting_persona;
};

struct TraitInferenceRun {
  Scorecard scorecard;
  std::vector<TraitPredictionRecord> predictions;
};

// For each test persona: optional defense per session (decoys drawn from a
// conflicting virtual persona when persona_conflict is set), filtering,
// inference with the three ICL personas, and type-aware scoring.
TraitInferenceRun run_trait_inference(const RunConfig& cfg, const TraitInferenceData& data,
                                      Backend& backend);

// Writes recovered.jsonl / predictions.jsonl and scorecard.jsonl into dir.
void write_run_artifacts(const PromptRecoveryRun& run, const std::filesystem::path& dir);
void write_run_artifacts(const TraitInferenceRun& run, const std::filesystem::path& dir);

ChatRequest build_rewrite_request(std::string_view prompt_text);
// Same id, DR_REWRITTEN variant. Throws ArgumentError for a non-ORIGINAL
// input and EmptyResponseError for a blank rewrite.
PromptRecord rewrite_dr_variant(const PromptRecord& prompt, Backend& backend);

inline constexpr std::size_t kPersonaSessions = 7;
inline constexpr std::size_t kMinQueriesPerSession = 3;
inline constexpr std::size_t kMaxQueriesPerSession = 5;

ChatRequest build_persona_query_request(const PersonaProfile& persona,
                                        const TraitSchema& schema = TraitSchema::standard());
// Strips a leading "User prompt:" and parses "Session k:" blocks of dash
// queries. Throws StructureError unless there are 7 sessions of 3-5 queries.
std::vector<std::vector<std::string>> parse_persona_queries(std::string_view reply);
std::vector<std::vector<std::string>> generate_persona_queries(
    const PersonaProfile& persona, Backend& backend,
    const TraitSchema& schema = TraitSchema::standard());

}  // namespace wraleak

#endif  // WRALEAK_HARNESS_H_
