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
#include "wraleak/defense.h"

#include <algorithm>
#include <cmath>
#include <regex>

#include <nlohmann/json.hpp>

#include "wraleak/digest.h"
#include "wraleak/error.h"
#include "wraleak/random.h"
#include "wraleak/text_util.h"

namespace wraleak {

using nlohmann::json;

std::string_view to_string(MergeMode m) {
  return m == MergeMode::kInterleave ? "interleave" : "shuffle";
}

MergeMode parse_merge_mode(std::string_view s) {
  const std::string t = to_lower(trim(s));
  if (t == "interleave") return MergeMode::kInterleave;
  if (t == "shuffle" || t == "full_shuffle") return MergeMode::kFullShuffle;
  throw ArgumentError("unknown merge mode '" + std::string(s) + "'");
}

void DefenseConfig::validate() const {
  if (decoy_count < 0) throw ArgumentError("decoy_count must be >= 0");
  if (!(visibility_fraction > 0.0 && visibility_fraction <= 1.0)) {
    throw ArgumentError("visibility_fraction must be in (0, 1]");
  }
}

std::string DefenseConfig::digest() const {
  const json j = {{"decoy_count", decoy_count},
                  {"merge_mode", to_string(merge_mode)},
                  {"visibility_fraction", format_fixed(visibility_fraction, 6)},
                  {"persona_conflict", persona_conflict},
                  {"rng_seed", rng_seed}};
  return short_digest(j.dump());
}

ChatRequest build_decoy_request(std::string_view real_prompt, int n, const PersonaProfile* steer) {
  if (n < 1) throw ArgumentError("decoy count must be >= 1");
  std::string text =
      "You generate decoy prompts for a web research agent. The decoys run alongside the user's "
      "real prompt so that someone watching which domains the agent visits cannot tell which "
      "task is real.\n\n"
      "Write " + std::to_string(n) +
      " decoy prompts. Each decoy stays on the same general topic as the real prompt but changes "
      "the context, the goal, or how specific the entities are. Each decoy is a realistic, "
      "self-contained research request and never repeats the real prompt.\n";
  if (steer != nullptr) {
    text +=
        "\nWrite the decoys as the following person would, so that their background and "
        "interests show through:\n" +
        persona_summary(*steer) + "\n";
  }
  text += "\nOutput exactly " + std::to_string(n) +
          " numbered lines (\"1. ...\") with one decoy per line and nothing else.\n\n"
          "Real prompt:\n\"" +
          std::string(trim(real_prompt)) + "\"\n\nDecoys:";
  return ChatRequest::for_role(Role::kDecoy, std::move(text));
}

std::vector<std::string> parse_decoys(std::string_view reply, int n, std::string_view real_prompt) {
  static const std::regex kNumbered(R"(^\s*\(?(\d+)[.):]\s*(.+)$)");
  std::vector<std::string> out;
  for (const auto& line : split_lines(reply)) {
    std::smatch m;
    if (!std::regex_match(line, m, kNumbered)) continue;
    std::string decoy = strip_quotes(m.str(2));
    if (decoy.empty()) continue;
    out.push_back(std::move(decoy));
  }
  if (static_cast<int>(out.size()) < n) {
    throw StructureError("expected " + std::to_string(n) + " decoys, parsed " +
                             std::to_string(out.size()),
                         std::string(reply));
  }
  out.resize(static_cast<std::size_t>(n));
  const std::string real = to_lower(trim(real_prompt));
  for (const auto& d : out) {
    if (to_lower(d) == real) throw ArgumentError("decoy repeats the real prompt: " + d);
  }
  return out;
}

std::vector<std::string> generate_decoys(std::string_view real_prompt, int n, Backend& backend,
                                         const PersonaProfile* steer) {
  return parse_decoys(backend.complete_text(build_decoy_request(real_prompt, n, steer)), n,
                      real_prompt);
}

DomainTrace merge_traces(const DomainTrace& original, std::span<const DomainTrace> decoys,
                         MergeMode mode, std::uint64_t seed) {
  if (original.empty()) throw ArgumentError("cannot merge into an empty trace");
  std::size_t total = original.size();
  for (const auto& d : decoys) total += d.size();
  if (total == original.size()) return original;

  Rng rng(seed);
  std::vector<TraceEvent> merged;
  merged.reserve(total);
  if (mode == MergeMode::kFullShuffle) {
    merged = original.events();
    for (const auto& d : decoys) merged.insert(merged.end(), d.events().begin(), d.events().end());
    rng.shuffle(merged);
  } else {
    // Drawing the next source with probability proportional to its remaining
    // length makes every order-preserving interleaving equally likely.
    std::vector<const std::vector<TraceEvent>*> sources = {&original.events()};
    for (const auto& d : decoys) sources.push_back(&d.events());
    std::vector<std::size_t> pos(sources.size(), 0);
    std::size_t remaining = total;
    while (remaining > 0) {
      std::size_t pick = rng.uniform_index(remaining);
      std::size_t s = 0;
      for (;; ++s) {
        const std::size_t left = sources[s]->size() - pos[s];
        if (pick < left) break;
        pick -= left;
      }
      merged.push_back((*sources[s])[pos[s]++]);
      --remaining;
    }
  }
  const std::int64_t first = original.events().front().timestamp_ms;
  const std::int64_t span = original.events().back().timestamp_ms - first;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    merged[i].timestamp_ms =
        merged.size() == 1 ? first
                           : first + static_cast<std::int64_t>(
                                         (static_cast<long double>(span) * i) / (merged.size() - 1));
  }
  return original.with_events(std::move(merged));
}

std::size_t visible_count(std::size_t size, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ArgumentError("fraction must be in (0, 1]");
  if (size == 0) return 0;
  // The epsilon absorbs products such as 0.6 * 10 = 6.000000000000001.
  const double raw = fraction * static_cast<double>(size);
  const auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::clamp<std::size_t>(k, 1, size);
}

DomainTrace mask_visibility(const DomainTrace& trace, double fraction, std::uint64_t seed) {
  if (trace.empty()) throw ArgumentError("cannot mask an empty trace");
  const std::size_t k = visible_count(trace.size(), fraction);
  if (k == trace.size()) return trace;
  Rng rng(seed);
  std::vector<TraceEvent> kept;
  kept.reserve(k);
  for (std::size_t i : rng.sample_indices(trace.size(), k)) kept.push_back(trace.events()[i]);
  return trace.with_events(std::move(kept));
}

std::vector<KeywordRule> parse_keyword_map(std::string_view text, const TraitSchema& schema) {
  std::vector<KeywordRule> rules;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const int line_no = static_cast<int>(i + 1);
    const auto fail = [&](const std::string& why) {
      return ParseError("line " + std::to_string(line_no) + ": " + why, std::string(line), line_no);
    };
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.emplace_back(trim(line.substr(start, tab == std::string_view::npos ? line.npos
                                                                                : tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) throw fail("expected 3 tab-separated fields");
    const auto key = schema.resolve(fields[1]);
    if (!key || *key == kBigFiveKey) throw fail("unknown trait '" + fields[1] + "'");
    if (fields[0].empty() || fields[2].empty()) throw fail("empty substring or value");
    rules.push_back(KeywordRule{to_lower(fields[0]), *key, fields[2]});
  }
  return rules;
}

std::vector<KeywordRule> load_keyword_map(const std::filesystem::path& path,
                                          const TraitSchema& schema) {
  try {
    return parse_keyword_map(read_file(path), schema);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.raw(), e.line());
  }
}

TraitEstimate estimate_traits_keywords(std::span<const DomainTrace> history,
                                       std::span<const KeywordRule> rules) {
  std::map<std::string, std::map<std::string, int>> votes;
  for (const auto& trace : history) {
    for (const auto& e : trace.events()) {
      for (const auto& r : rules) {
        if (e.domain.find(r.substring) != std::string::npos) ++votes[r.trait_key][r.value];
      }
    }
  }
  TraitEstimate est;
  for (const auto& [key, values] : votes) {
    // std::map iterates values in ascending order, so the first maximum is
    // the lexicographically smallest.
    const auto best = std::max_element(values.begin(), values.end(), [](const auto& a, const auto& b) {
      return a.second < b.second;
    });
    const int ties = static_cast<int>(std::count_if(
        values.begin(), values.end(), [&](const auto& v) { return v.second == best->second; }));
    if (ties > 1) est.ties.push_back(key);
    est.estimates[key] = TraitEstimate::Entry{best->first, best->second};
  }
  return est;
}

const PersonaProfile& select_conflicting_persona(const TraitEstimate& estimate,
                                                 std::span<const PersonaProfile> pool) {
  if (pool.empty()) throw ArgumentError("persona pool is empty");
  const PersonaProfile* best = nullptr;
  int best_count = -1;
  for (const auto& p : pool) {
    int count = 0;
    for (const auto& [key, entry] : estimate.estimates) {
      const TraitValue* v = p.trait(key);
      if (v != nullptr && to_lower(trim(v->raw)) != to_lower(trim(entry.value))) ++count;
    }
    if (count > best_count || (count == best_count && p.persona_id < best->persona_id)) {
      best = &p;
      best_count = count;
    }
  }
  return *best;
}

namespace {

constexpr std::string_view kUtilityTemplateHead =
    "You are an impartial evaluator tasked with assessing the **utility** of a research report "
    "generated by an autonomous web research agent.\n\n"
    "## Definition of Utility\n"
    "Utility means how helpful the report is for a human reader to achieve their research goals.\n"
    "Key aspects of utility include:\n"
    "- **Coverage**: How well does the report cover relevant aspects of the research question?\n"
    "- **Depth**: How detailed and well-explained are the findings?\n"
    "- **Accuracy & Evidence**: Are claims supported with sources, citations, or reasoning?\n"
    "- **Clarity**: Is the report clearly structured and easy to understand?\n"
    "- **Actionability**: Does the report provide insights or conclusions that a user could act "
    "upon?\n\n"
    "## Instructions\n"
    "1. Read the research question and the report.\n"
    "2. Evaluate the report's utility using the dimensions above.\n"
    "3. Assign a **utility score** between 1 and 10.\n"
    "- `1` = very low utility, incomplete, or misleading.\n"
    "- `10` = extremely useful, comprehensive, reliable.\n"
    "4. Provide your output strictly in **valid JSON**.\n\n"
    "## Input\n"
    "Research Question: ";

constexpr std::string_view kUtilityTemplateTail =
    "\n\n## Output Format\n"
    "\"research_question\": \"...\",\n"
    "\"coverage_score\": 0,\n"
    "\"depth_score\": 0,\n"
    "\"accuracy_score\": 0,\n"
    "\"clarity_score\": 0,\n"
    "\"actionability_score\": 0,\n"
    "\"overall_utility_score\": 0,\n"
    "\"justification\": \"...\"\n\n"
    "Note: make sure to use \"[]\" instead of \"()\" to have valid JSON. Your output should be a "
    "valid JSON object.";

json parse_loose_object(std::string_view reply) {
  const auto first = reply.find('{');
  const auto last = reply.rfind('}');
  std::string body;
  if (first != std::string_view::npos && last != std::string_view::npos && last > first) {
    body = std::string(reply.substr(first, last - first + 1));
  } else {
    // The template's format block has no braces; judges sometimes copy that.
    body = "{" + std::string(trim(reply)) + "}";
  }
  try {
    json j = json::parse(body);
    if (!j.is_object()) throw ParseError("utility reply is not an object", std::string(reply));
    return j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed utility JSON: ") + e.what(), std::string(reply));
  }
}

}  // namespace

ChatRequest build_utility_request(std::string_view query, std::string_view report) {
  if (trim(query).empty() || trim(report).empty()) {
    throw ArgumentError("utility scoring needs a query and a report");
  }
  std::string text(kUtilityTemplateHead);
  text += trim(query);
  text += "\nReport: ";
  text += trim(report);
  text += kUtilityTemplateTail;
  return ChatRequest::for_role(Role::kUtility, std::move(text));
}

UtilityRecord parse_utility_reply(std::string_view reply) {
  const json j = parse_loose_object(reply);
  UtilityRecord rec;
  const std::pair<const char*, double*> fields[] = {
      {"coverage_score", &rec.coverage_score},
      {"depth_score", &rec.depth_score},
      {"accuracy_score", &rec.accuracy_score},
      {"clarity_score", &rec.clarity_score},
      {"actionability_score", &rec.actionability_score},
      {"overall_utility_score", &rec.overall_utility_score}};
  for (const auto& [name, slot] : fields) {
    const auto it = j.find(name);
    std::optional<double> v;
    if (it != j.end() && it->is_number()) v = it->get<double>();
    if (it != j.end() && it->is_string()) v = extract_number(it->get<std::string>());
    if (!v) throw ParseError(std::string("missing ") + name, std::string(reply));
    const double clamped = std::clamp(*v, 1.0, 10.0);
    if (clamped != *v) {
      rec.warnings.push_back(std::string(name) + " " + format_fixed(*v, 2) + " clamped to " +
                             format_fixed(clamped, 0));
    }
    *slot = clamped;
  }
  if (auto it = j.find("research_question"); it != j.end() && it->is_string()) {
    rec.research_question = it->get<std::string>();
  }
  if (auto it = j.find("justification"); it != j.end() && it->is_string()) {
    rec.justification = it->get<std::string>();
  }
  return rec;
}

UtilityRecord utility_score(std::string_view query, std::string_view report, Backend& backend) {
  ChatRequest req = build_utility_request(query, report);
  const std::string first = backend.complete_text(req);
  try {
    return parse_utility_reply(first);
  } catch (const ParseError&) {
    req.user_text += "\n\nYour output should be a valid JSON object";
    UtilityRecord rec = parse_utility_reply(backend.complete_text(std::move(req)));
    rec.warnings.insert(rec.warnings.begin(), "reformat retry used");
    return rec;
  }
}

}  // namespace wraleak
