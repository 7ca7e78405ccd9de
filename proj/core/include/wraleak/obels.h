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
#ifndef WRALEAK_OBELS_H_
#define WRALEAK_OBELS_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wraleak/backend.h"
#include "wraleak/embedding.h"

namespace wraleak {

// (intent, source_type, entity). Modifiers such as price or audience are
// carried as ("target", source_type, entity).
struct Triplet {
  std::string intent;
  std::string source_type;
  std::string entity;

  bool operator==(const Triplet&) const = default;
};

std::string render_triplet(const Triplet& t);  // ("learn", "cuisine", "Swahili dish")

struct ObelsScores {
  double functional_equivalence = 0.0;
  double domain_type_equivalence = 0.0;
  double semantic_equivalence = 0.0;
  double entity_granularity_tolerance = 0.0;
  std::vector<std::pair<Triplet, Triplet>> aligned_triplets;
  std::map<std::string, std::string> rationale;
  std::vector<std::string> warnings;
};

inline constexpr std::string_view kObelsReformatSuffix =
    "Your output should be a valid JSON object";

ChatRequest build_triplet_request(std::string_view prompt_text);

// Accepts tuple-per-line ("a", "b", "c") and bracketed ["a", "b", "c"]
// forms, including a JSON list of lists. Throws ParseError when no triplet
// with three non-empty fields is found.
std::vector<Triplet> parse_triplets(std::string_view model_output);

std::vector<Triplet> abstract_triplets(std::string_view prompt_text, Backend& backend);

ChatRequest build_obels_request(std::span<const Triplet> a, std::span<const Triplet> b);

// Parses the judge's JSON object. The four scores are required and clamped
// to [0, 1] (with a warning); aligned_triplets and rationale may be absent.
// Throws ParseError on malformed JSON or missing scores.
ObelsScores parse_obels_reply(std::string_view reply);

// One reformat retry (appending kObelsReformatSuffix) on a malformed reply.
ObelsScores score_obels(std::span<const Triplet> a, std::span<const Triplet> b,
                        Backend& backend);

// Cosine similarity of the two texts' embeddings, in [-1, 1].
double embedding_metric(std::string_view original, std::string_view recovered,
                        EmbeddingProvider& embedder);

ChatRequest build_judge_request(std::string_view original, std::string_view reconstructed);

// First decimal in the reply, clamped to [0, 1]. Throws ParseError when the
// reply holds no number.
double parse_judge_score(std::string_view reply);

double llm_judge_metric(std::string_view original, std::string_view recovered,
                        Backend& backend);

}  // namespace wraleak

#endif  // WRALEAK_OBELS_H_
