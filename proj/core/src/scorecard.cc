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
#include "wraleak/scorecard.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wraleak/error.h"
#include "wraleak/text_util.h"
#include "wraleak/trait_metrics.h"

namespace wraleak {

using nlohmann::json;

std::string_view to_string(ScorecardKind k) {
  return k == ScorecardKind::kPromptRecovery ? "prompt_recovery" : "trait_inference";
}

namespace {

ScorecardKind parse_kind(std::string_view s) {
  if (s == "prompt_recovery") return ScorecardKind::kPromptRecovery;
  if (s == "trait_inference") return ScorecardKind::kTraitInference;
  throw ParseError("unknown scorecard kind '" + std::string(s) + "'");
}

TraitCategory category_of(std::string_view key, const TraitSchema& schema) {
  if (key == kBigFiveKey) return TraitCategory::kPsychographic;
  return schema.at(key).category;
}

}  // namespace

std::map<std::string, double> compute_aggregate(const Scorecard& card, const TraitSchema& schema) {
  std::map<std::string, double> agg;
  std::size_t ok = 0;
  std::map<std::string, std::vector<double>> columns;
  std::map<TraitCategory, std::vector<double>> categories;
  for (const auto& row : card.rows) {
    if (!row.ok) continue;
    ++ok;
    for (const auto& [key, value] : row.metrics) {
      columns[key].push_back(value);
      if (card.kind == ScorecardKind::kTraitInference && key.rfind(kTraitPrefix, 0) == 0) {
        categories[category_of(key.substr(kTraitPrefix.size()), schema)].push_back(value);
      }
    }
  }
  agg["n_items"] = static_cast<double>(card.rows.size());
  agg["n_ok"] = static_cast<double>(ok);
  agg["n_error"] = static_cast<double>(card.rows.size() - ok);
  for (const auto& [key, values] : columns) agg[key] = mean_of(values);
  if (card.kind == ScorecardKind::kTraitInference) {
    for (TraitCategory cat : kAllCategories) {
      const auto& v = categories[cat];
      const std::string prefix = "category:" + std::string(to_string(cat));
      agg[prefix + ":mean"] = mean_of(v);
      agg[prefix + ":median"] = median_of(v);
      agg[prefix + ":count"] = static_cast<double>(v.size());
    }
  }
  return agg;
}

void finalize_scorecard(Scorecard& card, const TraitSchema& schema) {
  std::stable_sort(card.rows.begin(), card.rows.end(),
                   [](const ScorecardRow& a, const ScorecardRow& b) {
                     return natural_less(a.item_id, b.item_id);
                   });
  card.aggregate = compute_aggregate(card, schema);
  const auto errors = static_cast<std::size_t>(card.aggregate["n_error"]);
  card.failed = !card.rows.empty() && errors * 2 > card.rows.size();
}

bool aggregate_consistent(const Scorecard& card, double tolerance, const TraitSchema& schema) {
  const auto fresh = compute_aggregate(card, schema);
  if (fresh.size() != card.aggregate.size()) return false;
  for (const auto& [key, value] : fresh) {
    const auto it = card.aggregate.find(key);
    if (it == card.aggregate.end()) return false;
    if (!(std::abs(it->second - value) <= tolerance)) return false;
  }
  return true;
}

std::string serialize_scorecard(const Scorecard& card) {
  std::ostringstream out;
  out << json{{"record", "header"},
              {"kind", to_string(card.kind)},
              {"label", card.label},
              {"config_digest", card.config_digest},
              {"failed", card.failed}}
             .dump()
      << '\n';
  for (const auto& row : card.rows) {
    json j = {{"record", "row"},
              {"item_id", row.item_id},
              {"ok", row.ok},
              {"fields", row.fields},
              {"metrics", row.metrics}};
    if (!row.error.empty()) j["error"] = row.error;
    out << j.dump() << '\n';
  }
  out << json{{"record", "aggregate"}, {"values", card.aggregate}}.dump() << '\n';
  return out.str();
}

Scorecard parse_scorecard(std::string_view text) {
  Scorecard card;
  bool header = false, aggregate = false;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    try {
      const json j = json::parse(line);
      const std::string record = j.at("record").get<std::string>();
      if (record == "header") {
        card.kind = parse_kind(j.at("kind").get<std::string>());
        card.label = j.value("label", std::string());
        card.config_digest = j.value("config_digest", std::string());
        card.failed = j.value("failed", false);
        header = true;
      } else if (record == "row") {
        ScorecardRow row;
        row.item_id = j.at("item_id").get<std::string>();
        row.ok = j.at("ok").get<bool>();
        row.error = j.value("error", std::string());
        row.fields = j.value("fields", std::map<std::string, std::string>());
        row.metrics = j.value("metrics", std::map<std::string, double>());
        card.rows.push_back(std::move(row));
      } else if (record == "aggregate") {
        card.aggregate = j.at("values").get<std::map<std::string, double>>();
        aggregate = true;
      } else {
        throw std::invalid_argument("unknown record type '" + record + "'");
      }
    } catch (const std::exception& ex) {
      throw ParseError("scorecard line " + std::to_string(line_no) + ": " + ex.what(),
                       std::string(line), line_no);
    }
  }
  if (!header || !aggregate) throw ParseError("scorecard lacks a header or aggregate record");
  return card;
}

void write_scorecard(const Scorecard& card, const std::filesystem::path& path) {
  write_file(path, serialize_scorecard(card));
}

Scorecard read_scorecard(const std::filesystem::path& path) {
  return parse_scorecard(read_file(path));
}

}  // namespace wraleak
