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
#ifndef WRALEAK_DEFENSE_H_
#define WRALEAK_DEFENSE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wraleak/backend.h"
#include "wraleak/persona.h"
#include "wraleak/trace.h"

namespace wraleak {

enum class MergeMode { kInterleave, kFullShuffle };
std::string_view to_string(MergeMode m);
MergeMode parse_merge_mode(std::string_view s);

struct DefenseConfig {
  int decoy_count = 0;
  MergeMode merge_mode = MergeMode::kInterleave;
  double visibility_fraction = 1.0;  // in (0, 1]
  bool persona_conflict = false;
  std::uint64_t rng_seed = 0;

  void validate() const;
  bool is_identity() const { return decoy_count == 0 && visibility_fraction >= 1.0 && !persona_conflict; }
  std::string digest() const;
};

// Asks the decoy role for n numbered decoys in the same topical space as
// real_prompt but with shifted context, intent or entity. A steering persona
// (conflicting virtual persona) is described in the request when given.
ChatRequest build_decoy_request(std::string_view real_prompt, int n,
                                const PersonaProfile* steer = nullptr);

// Throws StructureError when fewer than n numbered decoys parse, and
// ArgumentError when a decoy repeats the real prompt.
std::vector<std::string> parse_decoys(std::string_view reply, int n, std::string_view real_prompt);

std::vector<std::string> generate_decoys(std::string_view real_prompt, int n, Backend& backend,
                                         const PersonaProfile* steer = nullptr);

// INTERLEAVE: a uniformly random interleaving that keeps each input's
// internal order. FULL_SHUFFLE: a uniform permutation of all events.
// Timestamps are reassigned as a non-decreasing sequence over the original's
// time span. The result keeps the original's identity.
DomainTrace merge_traces(const DomainTrace& original, std::span<const DomainTrace> decoys,
                         MergeMode mode, std::uint64_t seed);

// ceil(fraction * size) events chosen uniformly, original order kept.
std::size_t visible_count(std::size_t size, double fraction);
DomainTrace mask_visibility(const DomainTrace& trace, double fraction, std::uint64_t seed);

struct KeywordRule {
  std::string substring;
  std::string trait_key;
  std::string value;
};

// Tab-separated "substring<TAB>trait_key<TAB>value" lines; '#' comments.
std::vector<KeywordRule> parse_keyword_map(std::string_view text,
                                           const TraitSchema& schema = TraitSchema::standard());
std::vector<KeywordRule> load_keyword_map(const std::filesystem::path& path,
                                          const TraitSchema& schema = TraitSchema::standard());

struct TraitEstimate {
  struct Entry {
    std::string value;
    int hits = 0;
  };
  std::map<std::string, Entry> estimates;
  std::vector<std::string> ties;  // trait keys whose top vote was tied
};

// Counts substring hits of every rule over every event domain and keeps the
// top-voted value per trait (lexicographically smaller value on ties).
TraitEstimate estimate_traits_keywords(std::span<const DomainTrace> history,
                                       std::span<const KeywordRule> rules);

// The pool persona whose values differ from the estimate on the most traits
// (case-insensitive), ties broken by ascending persona_id. Throws
// ArgumentError for an empty pool.
const PersonaProfile& select_conflicting_persona(const TraitEstimate& estimate,
                                                 std::span<const PersonaProfile> pool);

struct UtilityRecord {
  std::string research_question;
  double coverage_score = 0.0;
  double depth_score = 0.0;
  double accuracy_score = 0.0;
  double clarity_score = 0.0;
  double actionability_score = 0.0;
  double overall_utility_score = 0.0;
  std::string justification;
  std::vector<std::string> warnings;
};

ChatRequest build_utility_request(std::string_view query, std::string_view report);
// Scores are clamped into [1, 10] with a warning; justification may be absent.
UtilityRecord parse_utility_reply(std::string_view reply);
// One reformat retry on malformed JSON.
UtilityRecord utility_score(std::string_view query, std::string_view report, Backend& backend);

}  // namespace wraleak

#endif  // WRALEAK_DEFENSE_H_
