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
#ifndef WRALEAK_TRAIT_SCHEMA_H_
#define WRALEAK_TRAIT_SCHEMA_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wraleak {

enum class TraitKind { kNumeric, kOrdinal, kCategorical, kFreeText };
enum class TraitCategory { kDemographic, kOccupational, kPsychographic, kBehavioral };

std::string_view to_string(TraitKind k);
std::string_view to_string(TraitCategory c);
inline constexpr std::array<TraitCategory, 4> kAllCategories = {
    TraitCategory::kDemographic, TraitCategory::kOccupational,
    TraitCategory::kPsychographic, TraitCategory::kBehavioral};

// A trait value as written in a persona file or a model reply. numeric_value
// is set iff kind is kNumeric; ordinal_level (0..4) iff kind is kOrdinal.
struct TraitValue {
  TraitKind kind = TraitKind::kCategorical;
  std::string raw;
  std::optional<double> numeric_value;
  std::optional<int> ordinal_level;

  static TraitValue numeric(std::string raw, double value);
  static TraitValue ordinal(std::string raw, int level);
  static TraitValue categorical(std::string raw);
  static TraitValue free_text(std::string raw);

  bool operator==(const TraitValue&) const = default;
};

struct TraitSpec {
  std::string key;           // canonical snake_case key, e.g. "place_of_birth"
  std::string display_name;  // as written in prompts, e.g. "Place Of Birth"
  TraitKind kind;
  TraitCategory category;
  std::optional<double> numeric_scale;
};

// The five personality dimensions, in the order they are rendered.
inline constexpr std::array<std::string_view, 5> kBigFiveKeys = {
    "openness", "conscientiousness", "extraversion", "agreeableness", "neuroticism"};

// Reporting key that stands for the five dimensions together.
inline constexpr std::string_view kBigFiveKey = "big_five";

// Lowercase, drop spaces, underscores, hyphens and markdown asterisks, so
// "Veteran Status", "veteran_status" and "**Veteran Status**" coincide.
std::string normalize_trait_name(std::string_view name);

// Ordinal vocabulary: Extremely Low=0, Low=1, Average=2, High=3,
// Extremely High=4 (case-insensitive; digits 0-4 also accepted).
std::optional<int> ordinal_level_from_word(std::string_view word);
std::string_view ordinal_word(int level);

struct BigFiveParse {
  std::map<std::string, int> levels;  // keyed by kBigFiveKeys entries
  std::vector<std::string> skipped;   // segments with unknown dimension or level
};

// Parses "Openness: Extremely Low, Conscientiousness: High, ...".
BigFiveParse big_five_parse(std::string_view value_text);

// Renders levels in kBigFiveKeys order, omitting missing dimensions.
std::string render_big_five(const std::map<std::string, int>& levels);

// The 32-trait schema: 16 demographic, 5 occupational, 7 psychographic
// (ideology, political views, five personality dimensions) and 4 behavioral.
class TraitSchema {
 public:
  static const TraitSchema& standard();

  const std::vector<TraitSpec>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  const TraitSpec* find(std::string_view key) const;
  const TraitSpec& at(std::string_view key) const;

  // Maps a free-form trait name (any spelling, including known aliases such
  // as "Industry" or "Gender") to its canonical key. Returns kBigFiveKey for
  // the combined personality line and nullopt for unknown names.
  std::optional<std::string> resolve(std::string_view name) const;

  // Coerces raw text into the schema kind for key; nullopt when the text
  // does not fit (e.g. "unknown" for a numeric trait).
  std::optional<TraitValue> coerce(std::string_view key, std::string_view raw) const;

  // Copy with a different numeric scale, for datasets that store income in
  // other units.
  TraitSchema with_numeric_scale(std::string_view key, double scale) const;

 private:
  TraitSchema();
  std::vector<TraitSpec> entries_;
  std::map<std::string, std::string, std::less<>> aliases_;
};

// First number in text, honoring thousands separators and a trailing k/K.
std::optional<double> extract_number(std::string_view text);

}  // namespace wraleak

#endif  // WRALEAK_TRAIT_SCHEMA_H_
