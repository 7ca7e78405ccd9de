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
#include "wraleak/obels.h"

#include <algorithm>
#include <regex>

#include <nlohmann/json.hpp>

#include "wraleak/error.h"
#include "wraleak/text_util.h"
#include "wraleak/trait_schema.h"

namespace wraleak {

using nlohmann::json;

std::string render_triplet(const Triplet& t) {
  return "(\"" + t.intent + "\", \"" + t.source_type + "\", \"" + t.entity + "\")";
}

namespace {

constexpr std::string_view kTripletTemplateHead =
    "You are an AI system that abstracts natural language prompts into semantic triplets of the "
    "form: (intent, source_type, entity)\n\n"
    "Where:\n"
    "- `intent` captures the user's primary semantic goal. Instead of using a generic label like "
    "\"get_info\", choose more specific intents when appropriate. Use one of:\n"
    "  - \"learn\": to understand or gain knowledge about a topic\n"
    "  - \"explore\": to investigate options or alternatives\n"
    "  - \"analyze\": to understand causes, effects, or implications\n"
    "  - \"compare\": to contrast two or more entities or options\n"
    "  - \"summarize\": to find concise descriptions or overviews\n"
    "  - \"plan\": to organize steps toward a future action\n"
    "  - \"decide\": to weigh alternatives with the goal of making a choice\n"
    "  - \"book\", \"watch\", \"read\", \"evaluate\", etc. as appropriate\n"
    "  - Retain \"get_info\" only for truly generic factual lookups\n\n"
    "- `source_type` is the type of domain, service, or information requested (e.g., travel, "
    "symptom, policy_area, cooking_method, event, visa_process, treatment_method, academic_field, "
    "cuisine, etc).\n\n"
    "- `entity` is the specific concept, item, or group of interest (e.g., Italy, depression, "
    "cold turkey, face transplant, immigration, Dulles airport, cold turkey, PhD in Business, "
    "Swahili dish, etc).\n\n"
    "- If the prompt includes modifiers such as price, audience, date, location, or purpose, "
    "extract separate `target` triplets:\n"
    "  (\"target\", source_type, entity)\n\n"
    "Your output should be a list of triplets capturing each atomic semantic intent.\n\n"
    "**Prompt:**\n";

constexpr std::string_view kObelsTemplateHead =
    "You are an expert evaluator assessing the behavioral similarity between two user prompts. "
    "Each prompt has been abstracted into a **set of semantic triplets** of the form:\n\n"
    "(intent, source_type, entity)\n\n"
    "Your job is to compare the two sets holistically across four dimensions of behavioral "
    "similarity.\n\n"
    "---\n\n"
    "## Evaluation Guidelines\n\n"
    "### Step 1: Set-Level Alignment\n"
    "Compare the full **triplet sets** for Prompt A and Prompt B. Use semantic similarity (not "
    "strict string match) to align triplets. Triplets may align even if only **one or two "
    "fields** are semantically similar (e.g., both target energy sources, or both analyze "
    "environmental impacts). You may align multiple triplets as long as they reflect overlapping "
    "behavior or goal.\n\n"
    "**Be generous in identifying partial matches**—this alignment is used to assess user "
    "intent, not exact wording.\n\n"
    "Align greedily based on **overall behavioral similarity**, and include all meaningful pairs "
    "even if imperfect.\n\n"
    "### Step 2: Score the Four Dimensions\n"
    "Score from 0.0 to 1.0 using the following definitions:\n\n"
    "1. **Functional Equivalence**:\n"
    "Do the prompts express the same high-level user intent across their triplets?\n\n"
    "2. **Domain Type Equivalence**:\n"
    "Do the prompts rely on similar types of services or sources of information?\n\n"
    "3. **Semantic Equivalence**:\n"
    "Do the `entity` fields refer to semantically similar or related concepts?\n\n"
    "4. **Entity Granularity Tolerance**:\n"
    "Do the `entity` fields differ in specificity but still refer to compatible ideas (e.g., "
    "Honda vs. Honda Civic)?\n\n"
    "## Scoring Scale:\n"
    "- 1.0 = completely equivalent\n"
    "- 0.8 = very similar\n"
    "- 0.5 = somewhat related\n"
    "- 0.2 = weakly related\n"
    "- 0.0 = unrelated or contradictory\n\n"
    "---\n\n"
    "**Prompt A Triplets:**\n";

constexpr std::string_view kObelsTemplateTail =
    "\n\n---\n\n"
    "## Please Return:\n\n"
    "1. A list of aligned triplet pairs used in your comparison.\n"
    "2. A JSON object with four fields:\n"
    "   - `functional_equivalence`\n"
    "   - `domain_type_equivalence`\n"
    "   - `semantic_equivalence`\n"
    "   - `entity_granularity_tolerance`\n"
    "3. A short 1–2 sentence rationale for each score.\n\n"
    "Format your response like:\n\n"
    "```json\n"
    "{\n"
    "  \"aligned_triplets\": [\n"
    "    [[\"search\", \"flight\", \"Europe\"], [\"search\", \"flight\", \"international flights to "
    "Europe\"]],\n"
    "    [[\"target\", \"price_range\", \"cheapest\"], [\"target\", \"price_range\", \"low cost\"]]\n"
    "  ],\n"
    "  \"scores\": {\n"
    "    \"functional_equivalence\": 1.0,\n"
    "    \"domain_type_equivalence\": 0.8,\n"
    "    \"semantic_equivalence\": 0.6,\n"
    "    \"entity_granularity_tolerance\": 0.7\n"
    "  },\n"
    "  \"rationale\": {\n"
    "    \"functional_equivalence\": \"...\",\n"
    "    \"domain_type_equivalence\": \"...\",\n"
    "    \"semantic_equivalence\": \"...\",\n"
    "    \"entity_granularity_tolerance\": \"...\"\n"
    "  }\n"
    "}\n"
    "```";

constexpr std::string_view kJudgeTemplateHead =
    "You are an evaluator comparing two user prompts for task-oriented web agents. The goal is to "
    "assess whether the **Reconstructed Prompt** successfully captures the **core intent** of the "
    "**Original Prompt**, even if wording, style, or structure differ. You should focus on "
    "**overall task equivalence** — whether a web agent executing the reconstructed prompt would "
    "accomplish essentially the same task the user intended in the original.\n\n"
    "Give a similarity score from **0.0 to 1.0**, where:\n"
    "- 1.0 → Clearly the same task, just worded differently.\n"
    "- 0.9–0.8 → Minor differences that wouldn’t affect the outcome.\n"
    "- 0.7–0.5 → Generally the same topic or direction, but with some important drift.\n"
    "- 0.4–0.1 → Only loosely connected; task likely wouldn't work the same way.\n"
    "- 0.0 → Completely different or unrelated task.\n\n"
    "Err on the side of **leniency** — small phrasing or structure changes are acceptable if the "
    "intended action is preserved. Output **only the similarity score** (a number between 0.0 and "
    "1.0). Do not include explanations.\n\n"
    "Now evaluate the following prompts:\n\n"
    "Original Prompt: ";

constexpr std::array<const char*, 4> kDimensions = {
    "functional_equivalence", "domain_type_equivalence", "semantic_equivalence",
    "entity_granularity_tolerance"};

std::string render_triplets(std::span<const Triplet> ts) {
  std::string out;
  for (const auto& t : ts) {
    if (!out.empty()) out += '\n';
    out += render_triplet(t);
  }
  return out;
}

// Splits on commas outside double quotes.
std::vector<std::string> split_fields(std::string_view s) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      fields.push_back(strip_quotes(cur));
      cur.clear();
      continue;
    }
    cur.push_back(c);
  }
  fields.push_back(strip_quotes(cur));
  return fields;
}

}  // namespace

ChatRequest build_triplet_request(std::string_view prompt_text) {
  std::string text(kTripletTemplateHead);
  text += trim(prompt_text);
  text += "\n**Triplets:**";
  return ChatRequest::for_role(Role::kAbstractor, std::move(text));
}

std::vector<Triplet> parse_triplets(std::string_view model_output) {
  std::vector<Triplet> out;
  // Innermost (...) or [...] groups; nested lists reduce to their leaves.
  std::size_t open = std::string_view::npos;
  char want = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < model_output.size(); ++i) {
    const char c = model_output[i];
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '(' || c == '[') {
      open = i;
      want = c == '(' ? ')' : ']';
    } else if (open != std::string_view::npos && c == want) {
      const auto fields = split_fields(model_output.substr(open + 1, i - open - 1));
      open = std::string_view::npos;
      if (fields.size() != 3) continue;
      if (std::any_of(fields.begin(), fields.end(), [](const auto& f) { return f.empty(); })) {
        continue;
      }
      Triplet t{fields[0], fields[1], fields[2]};
      // The template's own schema line is not a triplet.
      if (t == Triplet{"intent", "source_type", "entity"}) continue;
      out.push_back(std::move(t));
    } else if (c == '\n') {
      open = std::string_view::npos;
    }
  }
  if (out.empty()) throw ParseError("no triplet found in model output", std::string(model_output));
  return out;
}

std::vector<Triplet> abstract_triplets(std::string_view prompt_text, Backend& backend) {
  if (trim(prompt_text).empty()) throw ArgumentError("prompt must be non-empty");
  return parse_triplets(backend.complete_text(build_triplet_request(prompt_text)));
}

ChatRequest build_obels_request(std::span<const Triplet> a, std::span<const Triplet> b) {
  if (a.empty() || b.empty()) throw ArgumentError("OBELS needs two non-empty triplet sets");
  std::string text(kObelsTemplateHead);
  text += render_triplets(a);
  text += "\n\n**Prompt B Triplets:**\n";
  text += render_triplets(b);
  text += kObelsTemplateTail;
  return ChatRequest::for_role(Role::kJudge, std::move(text));
}

namespace {

// The outermost {...} span, ignoring code fences and chatter around it.
json extract_json_object(std::string_view reply) {
  const auto first = reply.find('{');
  const auto last = reply.rfind('}');
  if (first == std::string_view::npos || last == std::string_view::npos || last < first) {
    throw ParseError("reply holds no JSON object", std::string(reply));
  }
  try {
    json j = json::parse(reply.substr(first, last - first + 1));
    if (!j.is_object()) throw ParseError("reply is not a JSON object", std::string(reply));
    return j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), std::string(reply));
  }
}

std::optional<double> number_field(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return extract_number(j.get<std::string>());
  return std::nullopt;
}

std::optional<Triplet> triplet_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) return std::nullopt;
  std::array<std::string, 3> f;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_string()) return std::nullopt;
    f[i] = std::string(trim(j[i].get<std::string>()));
    if (f[i].empty()) return std::nullopt;
  }
  return Triplet{f[0], f[1], f[2]};
}

}  // namespace

ObelsScores parse_obels_reply(std::string_view reply) {
  const json j = extract_json_object(reply);
  // Some judges put the scores at top level.
  const json& scores = j.contains("scores") && j["scores"].is_object() ? j["scores"] : j;
  ObelsScores out;
  double* slots[] = {&out.functional_equivalence, &out.domain_type_equivalence,
                     &out.semantic_equivalence, &out.entity_granularity_tolerance};
  for (std::size_t i = 0; i < kDimensions.size(); ++i) {
    const auto it = scores.find(kDimensions[i]);
    const auto v = it == scores.end() ? std::nullopt : number_field(*it);
    if (!v) throw ParseError(std::string("missing score ") + kDimensions[i], std::string(reply));
    const double clamped = std::clamp(*v, 0.0, 1.0);
    if (clamped != *v) {
      out.warnings.push_back(std::string(kDimensions[i]) + " " + format_fixed(*v, 3) +
                             " clamped to " + format_fixed(clamped, 1));
    }
    *slots[i] = clamped;
  }
  if (const auto it = j.find("aligned_triplets"); it != j.end() && it->is_array()) {
    for (const auto& pair : *it) {
      std::optional<Triplet> a, b;
      if (pair.is_array() && pair.size() == 2) {
        a = triplet_from_json(pair[0]);
        b = triplet_from_json(pair[1]);
      }
      if (a && b) {
        out.aligned_triplets.emplace_back(*a, *b);
      } else {
        out.warnings.push_back("skipped malformed aligned pair " + pair.dump());
      }
    }
  }
  if (const auto it = j.find("rationale"); it != j.end() && it->is_object()) {
    for (const auto& [k, v] : it->items()) {
      out.rationale[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return out;
}

ObelsScores score_obels(std::span<const Triplet> a, std::span<const Triplet> b,
                        Backend& backend) {
  ChatRequest req = build_obels_request(a, b);
  const std::string first = backend.complete_text(req);
  try {
    return parse_obels_reply(first);
  } catch (const ParseError&) {
    req.user_text += "\n\n";
    req.user_text += kObelsReformatSuffix;
    ObelsScores scores = parse_obels_reply(backend.complete_text(std::move(req)));
    scores.warnings.insert(scores.warnings.begin(), "reformat retry used");
    return scores;
  }
}

double embedding_metric(std::string_view original, std::string_view recovered,
                        EmbeddingProvider& embedder) {
  if (trim(original).empty() || trim(recovered).empty()) {
    throw ArgumentError("embedding metric needs two non-empty texts");
  }
  return cosine_similarity(embedder.embed(original), embedder.embed(recovered));
}

ChatRequest build_judge_request(std::string_view original, std::string_view reconstructed) {
  std::string text(kJudgeTemplateHead);
  text += trim(original);
  text += "\nReconstructed Prompt: ";
  text += trim(reconstructed);
  return ChatRequest::for_role(Role::kJudge, std::move(text));
}

double parse_judge_score(std::string_view reply) {
  static const std::regex kNumber(R"((\d+(?:\.\d+)?|\.\d+))");
  const std::string s(reply);
  std::smatch m;
  if (!std::regex_search(s, m, kNumber)) throw ParseError("judge reply holds no score", s);
  return std::clamp(std::stod(m.str(1)), 0.0, 1.0);
}

double llm_judge_metric(std::string_view original, std::string_view recovered,
                        Backend& backend) {
  if (trim(original).empty() || trim(recovered).empty()) {
    throw ArgumentError("judge metric needs two non-empty texts");
  }
  return parse_judge_score(backend.complete_text(build_judge_request(original, recovered)));
}

}  // namespace wraleak
