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
#include "wraleak/persona.h"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {

using nlohmann::json;

const TraitValue* PersonaProfile::trait(std::string_view key) const {
  const auto it = traits.find(std::string(key));
  return it == traits.end() ? nullptr : &it->second;
}

namespace {

bool has_all_big_five(const PersonaProfile& p) {
  return std::all_of(kBigFiveKeys.begin(), kBigFiveKeys.end(),
                     [&](std::string_view k) { return p.trait(k) != nullptr; });
}

}  // namespace

void validate_persona(const PersonaProfile& persona, const TraitSchema& schema) {
  if (persona.persona_id.empty()) throw ArgumentError("persona_id must be non-empty");
  for (const auto& [key, value] : persona.traits) {
    const TraitSpec* spec = schema.find(key);
    if (spec == nullptr) throw ArgumentError("unknown trait key '" + key + "'");
    if (value.kind != spec->kind) {
      throw ArgumentError("trait '" + key + "' has kind " + std::string(to_string(value.kind)) +
                          ", schema says " + std::string(to_string(spec->kind)));
    }
  }
  if (persona.selected_traits.size() != 5) {
    throw ArgumentError("selected_traits must hold exactly 5 keys, got " +
                        std::to_string(persona.selected_traits.size()));
  }
  for (const auto& key : persona.selected_traits) {
    if (key == kBigFiveKey) {
      if (!has_all_big_five(persona)) {
        throw ArgumentError("selected trait 'big_five' lacks a personality dimension");
      }
      continue;
    }
    if (schema.find(key) == nullptr) throw ArgumentError("unknown trait key '" + key + "'");
    if (persona.trait(key) == nullptr) {
      throw ArgumentError("selected trait '" + key + "' has no value");
    }
  }
  if (persona.split != "icl" && persona.split != "test") {
    throw ArgumentError("split must be 'icl' or 'test', got '" + persona.split + "'");
  }
}

namespace {

std::string value_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  throw std::invalid_argument("trait value must be a string, number or null");
}

PersonaProfile persona_from_json(const json& j, const TraitSchema& schema) {
  PersonaProfile p;
  p.persona_id = j.at("persona_id").get<std::string>();
  if (j.contains("split")) p.split = j["split"].get<std::string>();
  if (j.contains("summary") && !j["summary"].is_null()) p.summary = j["summary"].get<std::string>();

  std::set<std::string> mentioned;
  for (const auto& [name, v] : j.at("traits").items()) {
    const auto key = schema.resolve(name);
    if (!key) throw ArgumentError("unknown trait key '" + name + "'");
    if (*key == kBigFiveKey) {
      for (auto k : kBigFiveKeys) mentioned.insert(std::string(k));
      if (v.is_null()) continue;
      const BigFiveParse parsed = big_five_parse(value_text(v));
      if (!parsed.skipped.empty()) {
        throw ArgumentError("unparseable personality segment '" + parsed.skipped.front() + "'");
      }
      for (const auto& [dim, level] : parsed.levels) {
        p.traits[dim] = TraitValue::ordinal(std::string(ordinal_word(level)), level);
      }
      continue;
    }
    mentioned.insert(*key);
    if (v.is_null()) continue;
    const std::string raw = value_text(v);
    auto coerced = schema.coerce(*key, raw);
    if (!coerced) {
      throw ArgumentError("value '" + raw + "' does not fit trait '" + *key + "'");
    }
    p.traits[*key] = std::move(*coerced);
  }
  for (const auto& spec : schema.entries()) {
    if (!mentioned.count(spec.key)) {
      throw ArgumentError("missing trait key '" + spec.key + "' (use null for unknown)");
    }
  }
  for (const auto& s : j.at("selected_traits")) {
    const std::string name = s.get<std::string>();
    const auto key = schema.resolve(name);
    if (!key) throw ArgumentError("unknown trait key '" + name + "'");
    if (!p.selected_traits.insert(*key).second) {
      throw ArgumentError("selected trait '" + *key + "' listed twice");
    }
  }
  validate_persona(p, schema);
  return p;
}

}  // namespace

std::vector<PersonaProfile> parse_persona_text(std::string_view text, const TraitSchema& schema) {
  std::vector<PersonaProfile> out;
  std::set<std::string> ids;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    try {
      PersonaProfile p = persona_from_json(json::parse(line), schema);
      if (!ids.insert(p.persona_id).second) {
        throw ArgumentError("duplicate persona_id '" + p.persona_id + "'");
      }
      out.push_back(std::move(p));
    } catch (const std::exception& ex) {
      throw ParseError("line " + std::to_string(line_no) + ": " + ex.what(), std::string(line),
                       line_no);
    }
  }
  return out;
}

std::vector<PersonaProfile> load_persona_file(const std::filesystem::path& path,
                                              const TraitSchema& schema) {
  try {
    return parse_persona_text(read_file(path), schema);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.raw(), e.line());
  }
}

std::string serialize_personas(const std::vector<PersonaProfile>& personas,
                               const TraitSchema& schema) {
  std::ostringstream out;
  for (const auto& p : personas) {
    json traits = json::object();
    for (const auto& spec : schema.entries()) {
      const TraitValue* v = p.trait(spec.key);
      traits[spec.key] = v ? json(v->raw) : json(nullptr);
    }
    json j = {{"persona_id", p.persona_id},
              {"traits", traits},
              {"selected_traits", json(std::vector<std::string>(p.selected_traits.begin(),
                                                                p.selected_traits.end()))},
              {"split", p.split}};
    if (p.summary) j["summary"] = *p.summary;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string render_trait_list(const std::map<std::string, TraitValue>& traits,
                              const TraitSchema& schema) {
  std::vector<std::pair<std::string, std::string>> lines;
  std::map<std::string, int> big_five;
  for (const auto& [key, value] : traits) {
    const TraitSpec* spec = schema.find(key);
    if (spec == nullptr) continue;
    if (spec->kind == TraitKind::kOrdinal && value.ordinal_level &&
        std::find(kBigFiveKeys.begin(), kBigFiveKeys.end(), key) != kBigFiveKeys.end()) {
      big_five[key] = *value.ordinal_level;
      continue;
    }
    lines.emplace_back(spec->display_name, value.raw);
  }
  if (!big_five.empty()) lines.emplace_back("Big Five Scores", render_big_five(big_five));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& [name, value] : lines) {
    if (!out.empty()) out += '\n';
    out += "- " + name + ": " + value;
  }
  return out;
}

std::string persona_summary(const PersonaProfile& persona, const TraitSchema& schema) {
  if (persona.summary && !trim(*persona.summary).empty()) return *persona.summary;
  return render_trait_list(persona.traits, schema);
}

}  // namespace wraleak
