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
#ifndef WRALEAK_PROMPT_RECOVERY_H_
#define WRALEAK_PROMPT_RECOVERY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wraleak/backend.h"
#include "wraleak/prompt.h"
#include "wraleak/trace.h"

namespace wraleak {

enum class SelectionStrategy { kRandom, kEmbeddingTopK };
enum class ExampleOrdering { kRandom, kAscending, kDescending };
enum class Visibility { kDomains, kUrls };

std::string_view to_string(SelectionStrategy s);
std::string_view to_string(ExampleOrdering o);
std::string_view to_string(Visibility v);
SelectionStrategy parse_selection(std::string_view s);
ExampleOrdering parse_ordering(std::string_view s);
Visibility parse_visibility(std::string_view s);

struct IclConfig {
  int shots = 5;
  SelectionStrategy selection = SelectionStrategy::kRandom;
  ExampleOrdering ordering = ExampleOrdering::kRandom;
  int negatives_per_example = 0;
  // Quality-filtered contrastive ICL: negatives are regenerated until their
  // similarity to the original prompt falls below this value.
  std::optional<double> quality_filter_threshold;
  int negative_max_attempts = 5;
  bool include_timing = false;
  Visibility visibility = Visibility::kDomains;
  std::uint64_t rng_seed = 0;

  // Throws ArgumentError. Similarity orderings require embedding selection;
  // a quality filter requires at least one negative.
  void validate() const;
};

struct TracePromptPair {
  DomainTrace trace;
  PromptRecord prompt;
};

struct IclExample {
  TracePromptPair pair;
  std::optional<double> similarity;  // set by embedding selection
  std::vector<std::string> negatives;
};

// Picks cfg.shots examples for target. Pairs whose prompt id (or session id)
// matches the target are never eligible. RANDOM draws a seeded uniform
// sample; EMBEDDING_TOPK ranks by cosine similarity between trace renderings
// and keeps the top shots. The result is then ordered per cfg.ordering
// (ascending = least similar first). Throws ArgumentError when fewer than
// shots candidates remain.
std::vector<IclExample> select_examples(std::span<const TracePromptPair> train,
                                        const DomainTrace& target, const IclConfig& cfg,
                                        EmbeddingProvider* embedder, std::uint64_t seed);

// "- <domain>" per event; "@<ms>ms" suffix with timing; url_path appended
// under URL visibility. Throws ArgumentError("nothing to render") when empty.
std::string render_trace(const DomainTrace& trace, bool include_timing, Visibility visibility);

// Instantiates the recovery template. Examples with negatives switch to the
// contrastive (preferred / less preferred) template.
ChatRequest build_recovery_prompt(std::span<const IclExample> examples,
                                  std::string_view target_rendering, const IclConfig& cfg);

// attempt numbers the candidate so regenerated requests differ.
ChatRequest build_negative_request(std::string_view prompt_text, int attempt);

struct NegativeResult {
  std::string text;
  std::optional<double> similarity;  // set when a threshold was applied
  bool threshold_met = true;
  int attempts = 0;
};

// Asks the rewrite role for a vague or off-topic variant. With a threshold,
// regenerates until cosine(neg, original) < threshold or max_attempts
// candidates were drawn; in the latter case returns the least similar
// candidate with threshold_met = false. slot separates the attempt numbers
// of several negatives for the same prompt.
NegativeResult generate_negative(const PromptRecord& prompt, Backend& backend,
                                 std::optional<double> threshold, int max_attempts,
                                 int slot = 0);

// Removes surrounding whitespace, quotes and a leading "Reconstructed Prompt:"
// or "Preferred Query:" label from a model reply.
std::string clean_model_output(std::string_view text);

struct RecoveryResult {
  std::string text;
  std::string request_digest;
  std::vector<std::string> example_ids;
  std::vector<std::string> warnings;
};

// select_examples -> render_trace -> build_recovery_prompt -> complete.
// item_index is XORed into cfg.rng_seed so concurrent items stay
// deterministic. Throws EmptyResponseError when the cleaned reply is empty.
RecoveryResult recover_prompt(const DomainTrace& target, std::span<const TracePromptPair> train,
                              const IclConfig& cfg, Backend& backend,
                              std::uint64_t item_index = 0);

// One chat-format record per pair: the zero-shot recovery prompt over the
// rendered trace as user message, the ground-truth prompt as assistant
// message. Throws ArgumentError for no pairs, IoError on write failure.
void export_finetune_dataset(std::span<const TracePromptPair> pairs,
                             const std::filesystem::path& path, const IclConfig& cfg = {});

struct FinetuneRecord {
  std::string trace_rendering;
  std::string prompt_text;
};
std::vector<FinetuneRecord> parse_finetune_dataset(std::string_view text);

}  // namespace wraleak

#endif  // WRALEAK_PROMPT_RECOVERY_H_
