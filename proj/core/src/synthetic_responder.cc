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

#include "wraleak/synthetic_responder.h"

#include <algorithm>
#include <regex>
#include <set>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wraleak/error.h"
#include "wraleak/obels.h"
#include "wraleak/text_util.h"

namespace wraleak {

using nlohmann::json;

namespace {

const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = {
      "a",    "an",   "and",  "are",   "as",    "at",   "be",    "best", "by",   "can",
      "do",   "does", "for",  "from",  "get",   "how",  "i",     "in",   "is",   "it",
      "me",   "my",   "of",   "on",    "or",    "should", "some", "that", "the",  "their",
      "this", "to",   "what", "when",  "where", "which", "who",  "why",  "with", "you",
      "your", "about", "find", "tell", "give",  "there", "any",  "much", "most", "more"};
  return words;
}

std::vector<std::string> content_words(std::string_view text) {
  std::vector<std::string> out;
  for (auto& w : word_tokens(text)) {
    if (!stopwords().count(w) && std::find(out.begin(), out.end(), w) == out.end()) {
      out.push_back(std::move(w));
    }
  }
  return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t both = 0;
  for (const auto& x : a) both += b.count(x);
  return static_cast<double>(both) / static_cast<double>(a.size() + b.size() - both);
}

// Text between the last occurrence of open and the following close (or end).
std::string_view section_after(std::string_view text, std::string_view open,
                               std::string_view close = {}) {
  const auto at = text.rfind(open);
  if (at == std::string_view::npos) return {};
  std::string_view rest = text.substr(at + open.size());
  if (!close.empty()) {
    const auto end = rest.find(close);
    if (end != std::string_view::npos) rest = rest.substr(0, end);
  }
  return rest;
}

// Domains from "- host[/path] @Nms" lines or a quoted comma list.
std::set<std::string> domains_in(std::string_view block) {
  std::set<std::string> out;
  static const std::regex kHost(R"([a-z0-9][a-z0-9.-]*\.[a-z]{2,})");
  const std::string s(block);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kHost); it != std::sregex_iterator();
       ++it) {
    out.insert(it->str());
  }
  return out;
}

std::string join_words(const std::vector<std::string>& words, std::size_t max) {
  std::string out;
  for (std::size_t i = 0; i < words.size() && i < max; ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

// Site label of a host: "www.allrecipes.com" -> "allrecipes".
std::string site_label(const std::string& host) {
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (start <= host.size()) {
    const auto dot = host.find('.', start);
    labels.push_back(host.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return labels.size() >= 2 ? labels[labels.size() - 2] : host;
}

std::string reply_recovery(std::string_view text) {
  const bool contrastive = text.rfind("Preferred Query:") != std::string_view::npos &&
                           text.rfind("Preferred Query:") + 16 == text.size();
  const std::string_view label = contrastive ? "\n\nPreferred Query:" : "\n\nReconstructed Prompt:";
  const auto target = domains_in(section_after(text, "Visited domains:\n", label));

  // Worked examples: "Example k:\nVisited Domains:\n...\n\n<label>:\n\"prompt\"".
  static const std::regex kExample(
      R"rx(Example \d+:\nVisited Domains:\n([\s\S]*?)\n\n(?:Reconstructed Prompt|Preferred Query):\n"([^\n]*)")rx");
  const std::string s(text);
  double best = -1.0;
  std::string answer;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kExample); it != std::sregex_iterator();
       ++it) {
    const double score = jaccard(target, domains_in((*it)[1].str()));
    if (score > best) {
      best = score;
      answer = (*it)[2].str();
    }
  }
  if (!answer.empty() && best > 0.0) return "\"" + answer + "\"";
  // Zero-shot or no overlap: name the most informative sites.
  std::vector<std::string> sites;
  for (const auto& d : target) {
    const std::string l = site_label(d);
    if (std::find(sites.begin(), sites.end(), l) == sites.end()) sites.push_back(l);
  }
  if (sites.empty()) return "Find general information online";
  return "Find information using " + join_words(sites, 4);
}

std::string reply_trait(std::string_view text) {
  const auto target = domains_in(section_after(text, "Visited_domains:\n", "\n\nInferred Traits:"));
  static const std::regex kExample(
      R"(Example \d+:\n\nVisited Domains:\n([^\n]*)\n\nInferred Traits:\n([\s\S]*?)\n\n---)");
  const std::string s(text);
  double best = -1.0;
  std::string answer;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kExample); it != std::sregex_iterator();
       ++it) {
    const double score = jaccard(target, domains_in((*it)[1].str()));
    if (score > best) {
      best = score;
      answer = (*it)[2].str();
    }
  }
  return answer.empty() ? "- Age: 40" : answer;
}

std::string lower_trim(std::string_view s) { return to_lower(trim(s)); }

std::string reply_obels(std::string_view text) {
  const auto parse = [](std::string_view block) {
    try {
      return parse_triplets(block);
    } catch (const ParseError&) {
      return std::vector<Triplet>{};
    }
  };
  const auto a = parse(section_after(text, "**Prompt A Triplets:**\n", "\n\n**Prompt B Triplets:**"));
  const auto b = parse(section_after(text, "**Prompt B Triplets:**\n", "\n\n---"));
  std::set<std::string> ia, ib, sa, sb, ta, tb, ea, eb;
  for (const auto& t : a) {
    ia.insert(lower_trim(t.intent));
    sa.insert(lower_trim(t.source_type));
    ta.insert(lower_trim(render_triplet(t)));
    for (auto& w : word_tokens(t.entity)) ea.insert(w);
  }
  for (const auto& t : b) {
    ib.insert(lower_trim(t.intent));
    sb.insert(lower_trim(t.source_type));
    tb.insert(lower_trim(render_triplet(t)));
    for (auto& w : word_tokens(t.entity)) eb.insert(w);
  }
  json aligned = json::array();
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (lower_trim(x.intent) == lower_trim(y.intent) ||
          lower_trim(x.source_type) == lower_trim(y.source_type)) {
        aligned.push_back({{x.intent, x.source_type, x.entity}, {y.intent, y.source_type, y.entity}});
        break;
      }
    }
  }
  const auto r = [](double v) { return std::stod(format_fixed(v, 3)); };
  json out = {{"aligned_triplets", aligned},
              {"scores",
               {{"functional_equivalence", r(jaccard(ia, ib))},
                {"domain_type_equivalence", r(jaccard(sa, sb))},
                {"semantic_equivalence", r(jaccard(ta, tb))},
                {"entity_granularity_tolerance", r(jaccard(ea, eb))}}},
              {"rationale",
               {{"functional_equivalence", "Share of intents in common."},
                {"domain_type_equivalence", "Share of source types in common."},
                {"semantic_equivalence", "Share of identical triplets."},
                {"entity_granularity_tolerance", "Share of entity words in common."}}}};
  return out.dump(2);
}

std::string reply_judge(std::string_view text) {
  if (text.find("**Prompt A Triplets:**") != std::string_view::npos) return reply_obels(text);
  const auto orig = section_after(text, "Original Prompt: ", "\nReconstructed Prompt: ");
  const auto rec = section_after(text, "\nReconstructed Prompt: ");
  const auto wa = word_tokens(orig), wb = word_tokens(rec);
  const double score = jaccard({wa.begin(), wa.end()}, {wb.begin(), wb.end()});
  return format_fixed(score, 2);
}

struct Keyword {
  const char* word;
  const char* label;
};

std::string reply_abstractor(std::string_view text) {
  const std::string prompt(trim(section_after(text, "**Prompt:**\n", "\n**Triplets:**")));
  const auto words = content_words(prompt);
  const std::set<std::string> all(words.begin(), words.end());
  static constexpr Keyword kIntents[] = {
      {"compare", "compare"}, {"vs", "compare"},   {"buy", "purchase"}, {"price", "purchase"},
      {"cheap", "purchase"},  {"learn", "learn"},  {"recipe", "learn"}, {"plan", "plan"},
      {"trip", "plan"},       {"book", "plan"},    {"treat", "treat"},  {"apply", "apply"}};
  static constexpr Keyword kSources[] = {
      {"recipe", "cuisine"}, {"dish", "cuisine"},    {"hotel", "travel"},    {"flight", "travel"},
      {"trip", "travel"},    {"visa", "visa_process"}, {"symptoms", "symptom"}, {"treatment", "treatment_method"},
      {"news", "news"},      {"phd", "academic_field"}, {"policy", "policy_area"}, {"price", "product"}};
  std::string intent = "find", source = "information";
  for (const auto& k : kIntents) {
    if (all.count(k.word)) {
      intent = k.label;
      break;
    }
  }
  for (const auto& k : kSources) {
    if (all.count(k.word)) {
      source = k.label;
      break;
    }
  }
  const std::string entity = words.empty() ? "topic" : join_words(words, 3);
  std::string out = "(\"" + intent + "\", \"" + source + "\", \"" + entity + "\")";
  if (words.size() > 3) {
    out += "\n(\"target\", \"" + source + "\", \"" + join_words({words.begin() + 3, words.end()}, 3) +
           "\")";
  }
  return out;
}

std::string reply_decoy(std::string_view text) {
  static const std::regex kCount(R"(Output exactly (\d+) numbered lines)");
  std::match_results<std::string_view::const_iterator> m;
  int n = 1;
  if (std::regex_search(text.begin(), text.end(), m, kCount)) n = std::stoi(m[1].str());
  const auto words = content_words(section_after(text, "Real prompt:\n\"", "\"\n\nDecoys:"));
  static constexpr const char* kAngles[] = {"history of", "beginner guide to", "local events about",
                                            "careers related to", "common myths about",
                                            "books on", "statistics on"};
  std::string out;
  for (int i = 0; i < n; ++i) {
    const std::string topic = words.empty() ? "everyday topics"
                                            : words[static_cast<std::size_t>(i) % words.size()];
    out += std::to_string(i + 1) + ". Look up the " + kAngles[i % 7] + " " + topic + " (angle " +
           std::to_string(i + 1) + ")\n";
  }
  return out;
}

std::string reply_rewrite(std::string_view text) {
  static const std::regex kCandidate(R"(Candidate (\d+):$)");
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_search(text.begin(), text.end(), m, kCandidate)) {
    // Contrastive negative: a vague query that keeps one word of the original.
    const int attempt = std::stoi(m[1].str());
    const auto words = content_words(section_after(text, "Original prompt:\n\"", "\"\n\nCandidate"));
    const std::string keep =
        words.empty() ? "things" : words[static_cast<std::size_t>(attempt) % words.size()];
    return "something general about " + keep + " maybe";
  }
  const std::string original(trim(section_after(text, "Original prompt:\n\"", "\"\n\nRewritten prompt:")));
  return "Research in depth: " + original +
         ". Cover the background, the current options and their trade-offs, cite reliable "
         "sources, and close with a short summary.";
}

std::string reply_utility(std::string_view text) {
  const std::string query(trim(section_after(text, "Research Question: ", "\nReport: ")));
  const std::size_t report_words = word_tokens(section_after(text, "\nReport: ", "\n\n")).size();
  const double base = std::clamp(3.0 + static_cast<double>(report_words) / 20.0, 1.0, 9.0);
  json j = {{"research_question", query},
            {"coverage_score", base},
            {"depth_score", base},
            {"accuracy_score", base},
            {"clarity_score", base},
            {"actionability_score", base},
            {"overall_utility_score", base},
            {"justification", "Scored from report length."}};
  return j.dump(2);
}

std::string reply_persona(std::string_view text) {
  static const std::regex kTrait(R"rx("trait_\d+": "([^"]*)")rx");
  std::vector<std::string> traits;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kTrait); it != std::sregex_iterator(); ++it) {
    traits.push_back((*it)[1].str());
  }
  if (traits.empty()) traits.push_back("general interests");
  std::string out = "User prompt:\n";
  for (std::size_t session = 0; session < 7; ++session) {
    out += "Session " + std::to_string(session + 1) + ":\n";
    for (std::size_t q = 0; q < 3; ++q) {
      const std::string& t = traits[(session * 3 + q) % traits.size()];
      out += "- Ideas for day " + std::to_string(session + 1) + " as someone with " + to_lower(t) +
             " (" + std::to_string(q + 1) + ")\n";
    }
    if (session + 1 < 7) out += '\n';
  }
  return out;
}

}  // namespace

std::string synthetic_reply(const ChatRequest& req) {
  const std::string_view text = req.user_text;
  switch (req.role) {
    case Role::kRecovery: return reply_recovery(text);
    case Role::kTrait: return reply_trait(text);
    case Role::kJudge: return reply_judge(text);
    case Role::kAbstractor: return reply_abstractor(text);
    case Role::kDecoy: return reply_decoy(text);
    case Role::kRewrite: return reply_rewrite(text);
    case Role::kUtility: return reply_utility(text);
    case Role::kPersona: return reply_persona(text);
  }
  return {};
}

}  // namespace wraleak
