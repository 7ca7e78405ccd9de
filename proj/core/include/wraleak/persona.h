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
#ifndef WRALEAK_PERSONA_H_
#define WRALEAK_PERSONA_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wraleak/trait_schema.h"

namespace wraleak {

// Ground-truth profile. traits holds every non-null schema trait; exactly
// five keys are selected (the traits embedded in generated queries).
struct PersonaProfile {
  std::string persona_id;
  std::map<std::string, TraitValue> traits;
  std::set<std::string> selected_traits;
  // "icl" for personas reserved as in-context examples, otherwise "test".
  std::string split = "test";
  // Free-text summary used when generating queries; rendered from traits
  // when absent.
  std::optional<std::string> summary;

  const TraitValue* trait(std::string_view key) const;
};

// Throws ArgumentError when a profile violates its invariants.
void validate_persona(const PersonaProfile& persona, const TraitSchema& schema);

// Line-delimited records:
//   {"persona_id": "...", "traits": {"age": "89", "veteran status": null, ...},
//    "selected_traits": [5 keys], "split": "icl"|"test", "summary": "..."}
// Every schema key must appear (null marks a missing value). Trait names are
// matched through TraitSchema::resolve; a combined "big five scores" string
// expands to the five dimensions.
std::vector<PersonaProfile> parse_persona_text(std::string_view text,
                                               const TraitSchema& schema = TraitSchema::standard());
std::vector<PersonaProfile> load_persona_file(const std::filesystem::path& path,
                                              const TraitSchema& schema = TraitSchema::standard());
std::string serialize_personas(const std::vector<PersonaProfile>& personas,
                               const TraitSchema& schema = TraitSchema::standard());

// "- Age: 89" style lines in display-name order, with the personality
// dimensions folded into one "Big Five Scores" line.
std::string render_trait_list(const std::map<std::string, TraitValue>& traits,
                              const TraitSchema& schema = TraitSchema::standard());

std::string persona_summary(const PersonaProfile& persona,
                            const TraitSchema& schema = TraitSchema::standard());

}  // namespace wraleak

#endif  // WRALEAK_PERSONA_H_
