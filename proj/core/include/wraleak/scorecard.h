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
#ifndef WRALEAK_SCORECARD_H_
#define WRALEAK_SCORECARD_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wraleak/trait_schema.h"

namespace wraleak {

enum class ScorecardKind { kPromptRecovery, kTraitInference };
std::string_view to_string(ScorecardKind k);

// Metric column keys for prompt-recovery rows.
inline constexpr std::string_view kMetricSbert = "sbert";
inline constexpr std::string_view kMetricJudge = "llm_judge";
inline constexpr std::string_view kMetricFunc = "e_func";
inline constexpr std::string_view kMetricDom = "e_dom";
inline constexpr std::string_view kMetricSem = "e_sem";
inline constexpr std::string_view kMetricEnt = "t_ent";
inline constexpr std::string_view kMetricUtility = "utility";

// Trait rows store "trait:<key>" scores plus these per-persona summaries.
inline constexpr std::string_view kTraitPrefix = "trait:";
inline constexpr std::string_view kMetricSelected = "selected_mean";
inline constexpr std::string_view kMetricUnselected = "unselected_mean";
inline constexpr std::string_view kMetricHighCount = "high_similarity_count";

struct ScorecardRow {
  std::string item_id;
  bool ok = true;
  std::string error;
  std::map<std::string, std::string> fields;
  std::map<std::string, double> metrics;
};

struct Scorecard {
  ScorecardKind kind = ScorecardKind::kPromptRecovery;
  std::string label;
  std::string config_digest;
  std::vector<ScorecardRow> rows;  // sorted by item_id
  std::map<std::string, double> aggregate;
  bool failed = false;  // more than half the rows are errors
};

// Aggregate statistics recomputed from the rows: per-metric means over ok
// rows for prompt recovery; category means/medians, selected/unselected
// means and the mean high-similarity count for trait inference. Always
// includes "n_items", "n_ok" and "n_error".
std::map<std::string, double> compute_aggregate(const Scorecard& card,
                                                const TraitSchema& schema = TraitSchema::standard());

// Sorts rows, fills the aggregate and the failed flag.
void finalize_scorecard(Scorecard& card, const TraitSchema& schema = TraitSchema::standard());

// True when the stored aggregate matches a recomputation within tolerance.
bool aggregate_consistent(const Scorecard& card, double tolerance = 1e-9,
                          const TraitSchema& schema = TraitSchema::standard());

// Line-delimited: a header record, one record per row, an aggregate record.
std::string serialize_scorecard(const Scorecard& card);
Scorecard parse_scorecard(std::string_view text);
void write_scorecard(const Scorecard& card, const std::filesystem::path& path);
Scorecard read_scorecard(const std::filesystem::path& path);

}  // namespace wraleak

#endif  // WRALEAK_SCORECARD_H_
