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
#include "wraleak/trait_metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {

std::string_view to_string(ScoreMethod m) {
  switch (m) {
    case ScoreMethod::kNumeric: return "numeric";
    case ScoreMethod::kOrdinal: return "ordinal";
    case ScoreMethod::kExact: return "exact";
    case ScoreMethod::kEmbedding: return "embedding";
  }
  return "exact";
}

double score_numeric(double pred, double truth, double scale) {
  if (!std::isfinite(pred) || !std::isfinite(truth) || !std::isfinite(scale)) {
    throw ArgumentError("numeric score needs finite inputs");
  }
  if (scale <= 0.0) throw ArgumentError("numeric scale must be > 0");
  return std::max(0.0, 1.0 - std::abs(pred - truth) / scale);
}

double score_ordinal(int pred_level, int truth_level) {
  if (pred_level < 0 || pred_level > 4 || truth_level < 0 || truth_level > 4) {
    throw ArgumentError("ordinal levels must be in 0..4");
  }
  return 1.0 - std::abs(pred_level - truth_level) / 4.0;
}

std::pair<double, ScoreMethod> score_categorical(std::string_view pred, std::string_view truth,
                                                 EmbeddingProvider& embedder) {
  const std::string_view p = trim(pred);
  const std::string_view t = trim(truth);
  if (p.empty() || t.empty()) throw ArgumentError("categorical score needs non-empty values");
  if (!contains_whitespace(t)) {
    return {to_lower(p) == to_lower(t) ? 1.0 : 0.0, ScoreMethod::kExact};
  }
  const double cos = cosine_similarity(embedder.embed(p), embedder.embed(t));
  return {std::max(0.0, cos), ScoreMethod::kEmbedding};
}

double score_free_text(std::string_view pred, std::string_view truth,
                       EmbeddingProvider& embedder) {
  if (trim(pred).empty() || trim(truth).empty()) {
    throw ArgumentError("free-text score needs non-empty values");
  }
  return std::max(0.0, cosine_similarity(embedder.embed(trim(pred)), embedder.embed(trim(truth))));
}

namespace {

bool is_big_five_dim(std::string_view key) {
  return std::find(kBigFiveKeys.begin(), kBigFiveKeys.end(), key) != kBigFiveKeys.end();
}

// Mean ordinal score over the dimensions present in truth; a dimension the
// prediction lacks scores 0.
double big_five_score(const std::map<std::string, int>& pred,
                      const std::map<std::string, int>& truth) {
  if (truth.empty()) throw ArgumentError("ground truth has no personality dimension");
  double sum = 0.0;
  for (const auto& [dim, level] : truth) {
    const auto it = pred.find(dim);
    if (it != pred.end()) sum += score_ordinal(it->second, level);
  }
  return sum / static_cast<double>(truth.size());
}

}  // namespace

TraitScore score_trait(std::string_view key, const TraitValue& pred, const TraitValue& truth,
                       const TraitSchema& schema, EmbeddingProvider& embedder) {
  TraitScore out;
  out.trait_key = std::string(key);
  if (key == kBigFiveKey) {
    out.method = ScoreMethod::kOrdinal;
    const BigFiveParse p = big_five_parse(pred.raw);
    const BigFiveParse t = big_five_parse(truth.raw);
    out.score = big_five_score(p.levels, t.levels);
    if (!p.skipped.empty()) out.note = "skipped personality segments";
    return out;
  }
  const TraitSpec& spec = schema.at(key);
  const auto coerce = [&](const TraitValue& v) -> std::optional<TraitValue> {
    if (v.kind == spec.kind) return v;
    return schema.coerce(key, v.raw);
  };
  switch (spec.kind) {
    case TraitKind::kNumeric: {
      out.method = ScoreMethod::kNumeric;
      const auto p = coerce(pred);
      const auto t = coerce(truth);
      if (!t) throw ArgumentError("ground truth for " + spec.key + " is not numeric");
      if (!p) {
        out.note = "coercion failure";
        return out;
      }
      out.score = score_numeric(*p->numeric_value, *t->numeric_value, spec.numeric_scale.value_or(1.0));
      return out;
    }
    case TraitKind::kOrdinal: {
      out.method = ScoreMethod::kOrdinal;
      const auto p = coerce(pred);
      const auto t = coerce(truth);
      if (!t) throw ArgumentError("ground truth for " + spec.key + " is not ordinal");
      if (!p) {
        out.note = "coercion failure";
        return out;
      }
      out.score = score_ordinal(*p->ordinal_level, *t->ordinal_level);
      return out;
    }
    case TraitKind::kCategorical: {
      if (trim(pred.raw).empty()) {
        out.note = "empty prediction";
        return out;
      }
      const auto [score, method] = score_categorical(pred.raw, truth.raw, embedder);
      out.score = score;
      out.method = method;
      return out;
    }
    case TraitKind::kFreeText: {
      out.method = ScoreMethod::kEmbedding;
      if (trim(pred.raw).empty()) {
        out.note = "empty prediction";
        return out;
      }
      out.score = score_free_text(pred.raw, truth.raw, embedder);
      return out;
    }
  }
  return out;
}

PersonaTraitReport score_persona(const TraitPrediction& prediction, const PersonaProfile& truth,
                                 const TraitSchema& schema, EmbeddingProvider& embedder) {
  PersonaTraitReport report;
  report.persona_id = truth.persona_id;
  std::map<std::string, int> truth_b5, pred_b5;
  for (const auto& [key, value] : truth.traits) {
    if (is_big_five_dim(key)) {
      if (value.ordinal_level) truth_b5[key] = *value.ordinal_level;
      continue;
    }
    const auto it = prediction.predicted.find(key);
    if (it == prediction.predicted.end()) {
      const TraitSpec& spec = schema.at(key);
      TraitScore missing{key, 0.0, ScoreMethod::kExact, "missing prediction"};
      if (spec.kind == TraitKind::kNumeric) missing.method = ScoreMethod::kNumeric;
      if (spec.kind == TraitKind::kFreeText) missing.method = ScoreMethod::kEmbedding;
      report.scores[key] = std::move(missing);
      continue;
    }
    report.scores[key] = score_trait(key, it->second, value, schema, embedder);
  }
  if (!truth_b5.empty()) {
    for (const auto& [key, value] : prediction.predicted) {
      if (is_big_five_dim(key) && value.ordinal_level) pred_b5[key] = *value.ordinal_level;
    }
    TraitScore s{std::string(kBigFiveKey), big_five_score(pred_b5, truth_b5), ScoreMethod::kOrdinal,
                 pred_b5.empty() ? "missing prediction" : ""};
    report.scores[s.trait_key] = std::move(s);
  }

  for (const auto& key : truth.selected_traits) {
    report.selected.insert(is_big_five_dim(key) ? std::string(kBigFiveKey) : key);
  }
  std::vector<double> selected, unselected;
  for (const auto& [key, s] : report.scores) {
    (report.selected.count(key) ? selected : unselected).push_back(s.score);
    if (s.score > kHighSimilarityThreshold) ++report.high_similarity_count;
  }
  report.selected_mean = mean_of(selected);
  report.unselected_mean = mean_of(unselected);
  return report;
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

CategoryReport summarize_reports(std::vector<PersonaTraitReport> personas,
                                 const TraitSchema& schema) {
  if (personas.empty()) throw ArgumentError("no persona reports to aggregate");
  CategoryReport report;
  std::map<TraitCategory, std::vector<double>> by_category;
  std::map<std::string, std::vector<double>> by_trait;
  std::vector<double> selected, unselected;
  for (const auto& p : personas) {
    for (const auto& [key, s] : p.scores) {
      const TraitCategory cat =
          key == kBigFiveKey ? TraitCategory::kPsychographic : schema.at(key).category;
      by_category[cat].push_back(s.score);
      by_trait[key].push_back(s.score);
    }
    selected.push_back(p.selected_mean);
    unselected.push_back(p.unselected_mean);
  }
  for (TraitCategory cat : kAllCategories) {
    const auto& v = by_category[cat];
    report.categories.push_back(CategorySummary{cat, mean_of(v), median_of(v), v.size()});
  }
  for (const auto& [key, v] : by_trait) report.trait_means[key] = mean_of(v);
  report.selected_mean = mean_of(selected);
  report.unselected_mean = mean_of(unselected);
  report.personas = std::move(personas);
  return report;
}

CategoryReport aggregate_scores(
    std::span<const std::pair<TraitPrediction, PersonaProfile>> predictions,
    const TraitSchema& schema, EmbeddingProvider& embedder) {
  if (predictions.empty()) throw ArgumentError("no predictions to aggregate");
  std::vector<PersonaTraitReport> reports;
  reports.reserve(predictions.size());
  for (const auto& [pred, truth] : predictions) {
    reports.push_back(score_persona(pred, truth, schema, embedder));
  }
  return summarize_reports(std::move(reports), schema);
}

}  // namespace wraleak
