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
#ifndef WRALEAK_TRAIT_METRICS_H_
#define WRALEAK_TRAIT_METRICS_H_

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wraleak/embedding.h"
#include "wraleak/persona.h"
#include "wraleak/trait_inference.h"
#include "wraleak/trait_schema.h"

namespace wraleak {

enum class ScoreMethod { kNumeric, kOrdinal, kExact, kEmbedding };
std::string_view to_string(ScoreMethod m);

struct TraitScore {
  std::string trait_key;
  double score = 0.0;
  ScoreMethod method = ScoreMethod::kExact;
  std::string note;  // e.g. "coercion failure", "missing prediction"
};

// Traits scoring strictly above this count as high-similarity leaks.
inline constexpr double kHighSimilarityThreshold = 0.7;

// max(0, 1 - |pred - truth| / scale). Throws ArgumentError for non-finite
// inputs or scale <= 0.
double score_numeric(double pred, double truth, double scale);

// 1 - |pred - truth| / 4 over levels 0..4. Throws ArgumentError otherwise.
double score_ordinal(int pred_level, int truth_level);

// Single-token truth: case-insensitive exact match (kExact). Multi-word
// truth: max(0, cosine) of the embeddings (kEmbedding).
std::pair<double, ScoreMethod> score_categorical(std::string_view pred, std::string_view truth,
                                                 EmbeddingProvider& embedder);

// max(0, cosine). Throws ArgumentError for empty text.
double score_free_text(std::string_view pred, std::string_view truth,
                       EmbeddingProvider& embedder);

// Dispatches on the schema kind of key. kBigFiveKey is accepted as well: both
// values are parsed as combined personality strings and the five ordinal
// scores are averaged. Values that cannot be coerced score 0.0 with a note.
TraitScore score_trait(std::string_view key, const TraitValue& pred, const TraitValue& truth,
                       const TraitSchema& schema, EmbeddingProvider& embedder);

struct PersonaTraitReport {
  std::string persona_id;
  std::map<std::string, TraitScore> scores;  // every non-null ground-truth trait
  std::set<std::string> selected;
  double selected_mean = 0.0;
  double unselected_mean = 0.0;
  int high_similarity_count = 0;
};

// Scores every ground-truth trait; traits missing from the prediction score
// 0.0.
PersonaTraitReport score_persona(const TraitPrediction& prediction, const PersonaProfile& truth,
                                 const TraitSchema& schema, EmbeddingProvider& embedder);

struct CategorySummary {
  TraitCategory category;
  double mean = 0.0;
  double median = 0.0;
  std::size_t count = 0;
};

struct CategoryReport {
  std::vector<PersonaTraitReport> personas;
  std::vector<CategorySummary> categories;  // in kAllCategories order
  std::map<std::string, double> trait_means;  // per schema key plus kBigFiveKey
  double selected_mean = 0.0;
  double unselected_mean = 0.0;
};

double mean_of(std::span<const double> values);
double median_of(std::vector<double> values);

// Category mean/median over all (persona, trait) pairs; per-persona
// selected/unselected means and high-similarity counts. Throws
// ArgumentError for empty input.
CategoryReport summarize_reports(std::vector<PersonaTraitReport> personas,
                                 const TraitSchema& schema);

CategoryReport aggregate_scores(
    std::span<const std::pair<TraitPrediction, PersonaProfile>> predictions,
    const TraitSchema& schema, EmbeddingProvider& embedder);

}  // namespace wraleak

#endif  // WRALEAK_TRAIT_METRICS_H_
