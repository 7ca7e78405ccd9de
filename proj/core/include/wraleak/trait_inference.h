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
#ifndef WRALEAK_TRAIT_INFERENCE_H_
#define WRALEAK_TRAIT_INFERENCE_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wraleak/backend.h"
#include "wraleak/persona.h"
#include "wraleak/trace.h"
#include "wraleak/trait_schema.h"

namespace wraleak {

inline constexpr std::size_t kTraitIclShots = 3;

struct TraitExample {
  MultiSessionTrace trace;
  PersonaProfile persona;
};

struct TraitPrediction {
  std::string persona_id;
  std::map<std::string, TraitValue> predicted;  // schema keys only
  std::string raw_output;
  std::vector<std::string> unparsed_lines;
  std::vector<std::string> notes;  // coercion failures, skipped personality segments
};

// Three worked examples (flat quoted domain lists and their trait lists),
// then the target's domains grouped under "Session k:" labels. Throws
// ArgumentError unless exactly three examples are given.
ChatRequest build_trait_prompt(std::span<const TraitExample> examples,
                               const MultiSessionTrace& target,
                               const TraitSchema& schema = TraitSchema::standard());

// Parses "- Trait: Value" lines. Unknown traits and malformed lines go to
// unparsed_lines; a later duplicate overrides an earlier one. Throws
// ParseError (carrying the raw text) when nothing parses.
TraitPrediction parse_trait_output(std::string_view text,
                                   const TraitSchema& schema = TraitSchema::standard());

struct TraitInferenceResult {
  TraitPrediction prediction;
  std::string request_digest;
  std::size_t sessions_used = 0;
};

// Truncates the target to its first sessions_limit sessions when set, then
// builds, sends and parses.
TraitInferenceResult infer_traits(const MultiSessionTrace& target,
                                  std::span<const TraitExample> examples, Backend& backend,
                                  std::optional<std::size_t> sessions_limit = std::nullopt,
                                  const TraitSchema& schema = TraitSchema::standard());

}  // namespace wraleak

#endif  // WRALEAK_TRAIT_INFERENCE_H_
