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
#include <gtest/gtest.h>

#include "test_paths.h"
#include "wraleak/error.h"
#include "wraleak/persona.h"
#include "wraleak/trait_schema.h"

namespace wraleak {
namespace {

const TraitSchema& S() { return TraitSchema::standard(); }

TEST(Schema, HasThirtyTwoTraitsInFourCategories) {
  EXPECT_EQ(S().entries().size(), 32u);
  std::map<TraitCategory, int> counts;
  for (const auto& e : S().entries()) ++counts[e.category];
  EXPECT_EQ(counts[TraitCategory::kDemographic], 16);
  EXPECT_EQ(counts[TraitCategory::kOccupational], 5);
  EXPECT_EQ(counts[TraitCategory::kPsychographic], 7);
  EXPECT_EQ(counts[TraitCategory::kBehavioral], 4);
}

TEST(Schema, ResolveNamesAndAliases) {
  EXPECT_EQ(S().resolve("Place Of Birth"), std::optional<std::string>("place_of_birth"));
  EXPECT_EQ(S().resolve("**Industry**"), std::optional<std::string>("industry_category"));
  EXPECT_EQ(S().resolve("Gender"), std::optional<std::string>("sex"));
  EXPECT_EQ(S().resolve("Big Five Scores"), std::optional<std::string>(kBigFiveKey));
  EXPECT_EQ(S().resolve("Favorite Color"), std::nullopt);
}

TEST(Schema, BigFiveParse) {
  const auto p = big_five_parse(
      "Openness: Extremely Low, Conscientiousness: High; Extraversion: average, Agreeableness: "
      "Extremely High, Neuroticism: Weird, junk");
  EXPECT_EQ(p.levels.at("openness"), 0);
  EXPECT_EQ(p.levels.at("agreeableness"), 4);
  EXPECT_EQ(p.levels.at("extraversion"), 2);
  EXPECT_EQ(p.levels.count("neuroticism"), 0u);
  EXPECT_EQ(p.skipped.size(), 2u);
}

TEST(Schema, ExtractNumber) {
  EXPECT_EQ(extract_number("519400.0"), 519400.0);
  EXPECT_EQ(extract_number("$45,000 per year"), 45000.0);
  EXPECT_EQ(extract_number("about 60k"), 60000.0);
  EXPECT_EQ(extract_number("late 30s"), 30.0);
  EXPECT_EQ(extract_number("1,2345"), 1.0);
  EXPECT_EQ(extract_number("none"), std::nullopt);
}

TEST(Schema, CoerceByKind) {
  EXPECT_EQ(S().coerce("age", "89")->numeric_value, 89.0);
  EXPECT_EQ(S().coerce("openness", "High")->ordinal_level, 3);
  EXPECT_EQ(S().coerce("openness", "sort of"), std::nullopt);
  EXPECT_EQ(S().coerce("sex", "Female")->kind, TraitKind::kCategorical);
  EXPECT_EQ(S().coerce("sex", "  "), std::nullopt);
}

TEST(Schema, NumericScaleOverride) {
  const auto s = S().with_numeric_scale("income", 100000.0);
  EXPECT_EQ(s.at("income").numeric_scale, 100000.0);
  EXPECT_THROW(S().with_numeric_scale("sex", 2.0), ArgumentError);
}

TEST(Persona, FixturesLoad) {
  const auto people = load_persona_file(testenv::fixture_dir() / "traits" / "personas.jsonl");
  ASSERT_EQ(people.size(), 9u);
  const auto& p0 = people[0];
  EXPECT_EQ(p0.persona_id, "persona_000");
  EXPECT_EQ(p0.split, "icl");
  EXPECT_EQ(p0.trait("age")->numeric_value, 89.0);
  EXPECT_EQ(p0.trait("openness")->ordinal_level, 0);
  EXPECT_EQ(p0.selected_traits.size(), 5u);
}

std::string persona_line(const std::string& extra_traits, const std::string& selected) {
  std::string traits;
  for (const auto& e : S().entries()) {
    if (extra_traits.find("\"" + e.display_name + "\"") != std::string::npos) continue;
    if (!traits.empty()) traits += ", ";
    std::string v = "\"x\"";
    if (e.kind == TraitKind::kNumeric) v = "\"40\"";
    if (e.kind == TraitKind::kOrdinal) v = "\"Low\"";
    traits += "\"" + e.display_name + "\": " + v;
  }
  if (!extra_traits.empty()) traits += ", " + extra_traits;
  return "{\"persona_id\": \"p\", \"traits\": {" + traits + "}, \"selected_traits\": [" + selected +
         "], \"split\": \"test\"}";
}

TEST(Persona, NullMarksMissingValues) {
  const auto people = parse_persona_text(persona_line(
      "\"Veteran Status\": null", "\"age\", \"sex\", \"race\", \"income\", \"openness\""));
  EXPECT_EQ(people[0].trait("veteran_status"), nullptr);
}

TEST(Persona, Errors) {
  const std::string five = "\"age\", \"sex\", \"race\", \"income\", \"openness\"";
  // Missing key entirely.
  std::string line = persona_line("", five);
  const auto at = line.find("\"Age\": \"40\", ");
  ASSERT_NE(at, std::string::npos);
  std::string missing = line;
  missing.erase(at, std::string("\"Age\": \"40\", ").size());
  EXPECT_THROW(parse_persona_text(missing), ParseError);
  // Four selected traits.
  EXPECT_THROW(parse_persona_text(persona_line("", "\"age\", \"sex\", \"race\", \"income\"")), ParseError);
  // Selected trait with a null value.
  EXPECT_THROW(parse_persona_text(persona_line("\"Veteran Status\": null",
                                               "\"age\", \"sex\", \"race\", \"income\", \"veteran status\"")),
               ParseError);
  // Uncoercible numeric value.
  EXPECT_THROW(parse_persona_text(persona_line("\"Age\": \"old\"", five)), ParseError);
  // Duplicate id.
  EXPECT_THROW(parse_persona_text(persona_line("", five) + "\n" + persona_line("", five)), ParseError);
}

TEST(Persona, SerializeRoundTrip) {
  const auto people = load_persona_file(testenv::fixture_dir() / "traits" / "personas.jsonl");
  const auto again = parse_persona_text(serialize_personas(people));
  ASSERT_EQ(again.size(), people.size());
  for (std::size_t i = 0; i < people.size(); ++i) {
    EXPECT_EQ(again[i].persona_id, people[i].persona_id);
    EXPECT_EQ(again[i].selected_traits, people[i].selected_traits);
    EXPECT_EQ(again[i].traits.size(), people[i].traits.size());
  }
}

TEST(Persona, TraitListFoldsBigFive) {
  const auto people = load_persona_file(testenv::fixture_dir() / "traits" / "personas.jsonl");
  const std::string list = render_trait_list(people[0].traits);
  EXPECT_NE(list.find("- Big Five Scores: Openness: Extremely Low, Conscientiousness: High"), std::string::npos);
  EXPECT_EQ(list.find("- Openness:"), std::string::npos);
  EXPECT_EQ(list.rfind("- Age: 89", 0), 0u);
}

}  // namespace
}  // namespace wraleak
