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
#include "wraleak/trait_schema.h"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {

std::string_view to_string(TraitKind k) {
  switch (k) {
    case TraitKind::kNumeric: return "numeric";
    case TraitKind::kOrdinal: return "ordinal";
    case TraitKind::kCategorical: return "categorical";
    case TraitKind::kFreeText: return "free_text";
  }
  return "categorical";
}

std::string_view to_string(TraitCategory c) {
  switch (c) {
    case TraitCategory::kDemographic: return "demographic";
    case TraitCategory::kOccupational: return "occupational";
    case TraitCategory::kPsychographic: return "psychographic";
    case TraitCategory::kBehavioral: return "behavioral";
  }
  return "demographic";
}

TraitValue TraitValue::numeric(std::string raw, double value) {
  if (!std::isfinite(value)) throw ArgumentError("numeric trait value must be finite");
  return TraitValue{TraitKind::kNumeric, std::move(raw), value, std::nullopt};
}

TraitValue TraitValue::ordinal(std::string raw, int level) {
  if (level < 0 || level > 4) throw ArgumentError("ordinal level must be in 0..4");
  return TraitValue{TraitKind::kOrdinal, std::move(raw), std::nullopt, level};
}

TraitValue TraitValue::categorical(std::string raw) {
  return TraitValue{TraitKind::kCategorical, std::move(raw), std::nullopt, std::nullopt};
}

TraitValue TraitValue::free_text(std::string raw) {
  return TraitValue{TraitKind::kFreeText, std::move(raw), std::nullopt, std::nullopt};
}

std::string normalize_trait_name(std::string_view name) {
  std::string out;
  for (unsigned char c : name) {
    if (std::isspace(c) || c == '_' || c == '-' || c == '*') continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

namespace {

// Lowercase with runs of space, hyphen and underscore folded to one space.
std::string fold_words(std::string_view s) {
  std::string out;
  bool gap = false;
  for (unsigned char c : trim(s)) {
    if (std::isspace(c) || c == '-' || c == '_') {
      gap = !out.empty();
      continue;
    }
    if (gap) out.push_back(' ');
    gap = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  while (!out.empty() && (out.back() == '.' || out.back() == '*')) out.pop_back();
  return out;
}

constexpr std::string_view kOrdinalWords[] = {"Extremely Low", "Low", "Average", "High",
                                              "Extremely High"};
constexpr std::string_view kBigFiveDisplay[] = {"Openness", "Conscientiousness", "Extraversion",
                                                "Agreeableness", "Neuroticism"};

}  // namespace

std::optional<int> ordinal_level_from_word(std::string_view word) {
  std::string w = fold_words(word);
  while (!w.empty() && w.front() == '*') w.erase(0, 1);
  if (w.size() == 1 && w[0] >= '0' && w[0] <= '4') return w[0] - '0';
  for (int i = 0; i < 5; ++i) {
    if (w == to_lower(kOrdinalWords[i])) return i;
  }
  return std::nullopt;
}

std::string_view ordinal_word(int level) {
  if (level < 0 || level > 4) throw ArgumentError("ordinal level must be in 0..4");
  return kOrdinalWords[level];
}

BigFiveParse big_five_parse(std::string_view value_text) {
  BigFiveParse result;
  std::size_t start = 0;
  while (start <= value_text.size()) {
    std::size_t end = value_text.find_first_of(",;", start);
    if (end == std::string_view::npos) end = value_text.size();
    const std::string_view segment = trim(value_text.substr(start, end - start));
    start = end + 1;
    if (segment.empty()) continue;
    const auto colon = segment.find(':');
    if (colon == std::string_view::npos) {
      result.skipped.emplace_back(segment);
      continue;
    }
    const std::string dim = normalize_trait_name(segment.substr(0, colon));
    const auto level = ordinal_level_from_word(segment.substr(colon + 1));
    bool known = false;
    for (auto key : kBigFiveKeys) known = known || dim == key;
    if (!known || !level) {
      result.skipped.emplace_back(segment);
      continue;
    }
    result.levels[dim] = *level;
  }
  return result;
}

std::string render_big_five(const std::map<std::string, int>& levels) {
  std::string out;
  for (std::size_t i = 0; i < kBigFiveKeys.size(); ++i) {
    const auto it = levels.find(std::string(kBigFiveKeys[i]));
    if (it == levels.end()) continue;
    if (!out.empty()) out += ", ";
    out += kBigFiveDisplay[i];
    out += ": ";
    out += ordinal_word(it->second);
  }
  return out;
}

TraitSchema::TraitSchema() {
  using K = TraitKind;
  using C = TraitCategory;
  const auto add = [this](std::string key, std::string display, K kind, C cat,
                          std::optional<double> scale = std::nullopt) {
    entries_.push_back(TraitSpec{std::move(key), std::move(display), kind, cat, scale});
  };
  add("age", "Age", K::kNumeric, C::kDemographic, 30.0);
  add("sex", "Sex", K::kCategorical, C::kDemographic);
  add("race", "Race", K::kCategorical, C::kDemographic);
  add("ancestry", "Ancestry", K::kCategorical, C::kDemographic);
  add("religion", "Religion", K::kCategorical, C::kDemographic);
  add("place_of_birth", "Place Of Birth", K::kCategorical, C::kDemographic);
  add("citizenship", "Citizenship", K::kCategorical, C::kDemographic);
  add("income", "Income", K::kNumeric, C::kDemographic, 200000.0);
  add("education", "Education", K::kCategorical, C::kDemographic);
  add("marital_status", "Marital Status", K::kCategorical, C::kDemographic);
  add("household_type", "Household Type", K::kCategorical, C::kDemographic);
  add("household_language", "Household Language", K::kCategorical, C::kDemographic);
  add("veteran_status", "Veteran Status", K::kCategorical, C::kDemographic);
  add("disability", "Disability", K::kCategorical, C::kDemographic);
  add("family_presence_and_age", "Family Presence And Age", K::kCategorical, C::kDemographic);
  add("health_insurance", "Health Insurance", K::kCategorical, C::kDemographic);

  add("employment_status", "Employment Status", K::kCategorical, C::kOccupational);
  add("industry_category", "Industry Category", K::kCategorical, C::kOccupational);
  add("occupation_category", "Occupation Category", K::kCategorical, C::kOccupational);
  add("class_of_worker", "Class Of Worker", K::kCategorical, C::kOccupational);
  add("detailed_job_description", "Detailed Job Description", K::kFreeText, C::kOccupational);

  add("ideology", "Ideology", K::kCategorical, C::kPsychographic);
  add("political_views", "Political Views", K::kCategorical, C::kPsychographic);
  for (std::size_t i = 0; i < kBigFiveKeys.size(); ++i) {
    add(std::string(kBigFiveKeys[i]), std::string(kBigFiveDisplay[i]), K::kOrdinal,
        C::kPsychographic);
  }

  add("lifestyle", "Lifestyle", K::kFreeText, C::kBehavioral);
  add("personal_time", "Personal Time", K::kFreeText, C::kBehavioral);
  add("mannerisms", "Mannerisms", K::kFreeText, C::kBehavioral);
  add("defining_quirks", "Defining Quirks", K::kFreeText, C::kBehavioral);

  for (const auto& e : entries_) {
    aliases_[normalize_trait_name(e.key)] = e.key;
    aliases_[normalize_trait_name(e.display_name)] = e.key;
  }
  aliases_["industry"] = "industry_category";
  aliases_["occupation"] = "occupation_category";
  aliases_["gender"] = "sex";
  aliases_["jobdescription"] = "detailed_job_description";
  for (const char* name : {"bigfive", "bigfivescores", "bigfivetraits", "bigfivepersonality",
                           "bigfivepersonalitytraits"}) {
    aliases_[name] = std::string(kBigFiveKey);
  }
}

const TraitSchema& TraitSchema::standard() {
  static const TraitSchema schema;
  return schema;
}

const TraitSpec* TraitSchema::find(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const TraitSpec& TraitSchema::at(std::string_view key) const {
  const TraitSpec* spec = find(key);
  if (spec == nullptr) throw ArgumentError("unknown trait key '" + std::string(key) + "'");
  return *spec;
}

std::optional<std::string> TraitSchema::resolve(std::string_view name) const {
  const std::string norm = normalize_trait_name(name);
  if (norm.empty()) return std::nullopt;
  const auto it = aliases_.find(norm);
  if (it == aliases_.end()) return std::nullopt;
  return it->second;
}

std::optional<TraitValue> TraitSchema::coerce(std::string_view key, std::string_view raw) const {
  const TraitSpec& spec = at(key);
  const std::string text(trim(raw));
  if (text.empty()) return std::nullopt;
  switch (spec.kind) {
    case TraitKind::kNumeric: {
      const auto n = extract_number(text);
      if (!n) return std::nullopt;
      return TraitValue::numeric(text, *n);
    }
    case TraitKind::kOrdinal: {
      const auto level = ordinal_level_from_word(text);
      if (!level) return std::nullopt;
      return TraitValue::ordinal(text, *level);
    }
    case TraitKind::kCategorical:
      return TraitValue::categorical(text);
    case TraitKind::kFreeText:
      return TraitValue::free_text(text);
  }
  return std::nullopt;
}

TraitSchema TraitSchema::with_numeric_scale(std::string_view key, double scale) const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ArgumentError("numeric scale must be > 0");
  TraitSchema copy = *this;
  for (auto& e : copy.entries_) {
    if (e.key != key) continue;
    if (e.kind != TraitKind::kNumeric) {
      throw ArgumentError("trait '" + e.key + "' is not numeric");
    }
    e.numeric_scale = scale;
    return copy;
  }
  throw ArgumentError("unknown trait key '" + std::string(key) + "'");
}

std::optional<double> extract_number(std::string_view text) {
  const auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  std::size_t i = 0;
  while (i < text.size() && !digit(text[i])) ++i;
  if (i == text.size()) return std::nullopt;
  std::size_t begin = i;
  if (begin > 0 && text[begin - 1] == '.') --begin;
  const bool negative = begin > 0 && text[begin - 1] == '-';

  std::string digits;
  std::size_t j = begin;
  while (j < text.size()) {
    const char c = text[j];
    if (digit(c) || c == '.') {
      if (c == '.' && digits.find('.') != std::string::npos) break;
      if (c == '.' && (j + 1 >= text.size() || !digit(text[j + 1]))) break;
      digits.push_back(c);
      ++j;
    } else if (c == ',' && digits.find('.') == std::string::npos && j + 3 < text.size() &&
               digit(text[j + 1]) && digit(text[j + 2]) && digit(text[j + 3]) &&
               (j + 4 >= text.size() || !digit(text[j + 4]))) {
      ++j;  // thousands separator
    } else {
      break;
    }
  }
  double value = std::stod(digits);
  if (j < text.size() && (text[j] == 'k' || text[j] == 'K') &&
      (j + 1 >= text.size() || !std::isalpha(static_cast<unsigned char>(text[j + 1])))) {
    value *= 1000.0;
  }
  return negative ? -value : value;
}

}  // namespace wraleak
