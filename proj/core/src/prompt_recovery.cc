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
#include "wraleak/prompt_recovery.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wraleak/error.h"
#include "wraleak/random.h"
#include "wraleak/text_util.h"

namespace wraleak {

using nlohmann::json;

std::string_view to_string(SelectionStrategy s) {
  return s == SelectionStrategy::kRandom ? "random" : "embedding_topk";
}

std::string_view to_string(ExampleOrdering o) {
  switch (o) {
    case ExampleOrdering::kRandom: return "random";
    case ExampleOrdering::kAscending: return "ascending";
    case ExampleOrdering::kDescending: return "descending";
  }
  return "random";
}

std::string_view to_string(Visibility v) { return v == Visibility::kDomains ? "domains" : "urls"; }

SelectionStrategy parse_selection(std::string_view s) {
  const std::string t = to_lower(trim(s));
  if (t == "random") return SelectionStrategy::kRandom;
  if (t == "embedding_topk" || t == "embedding" || t == "topk") {
    return SelectionStrategy::kEmbeddingTopK;
  }
  throw ArgumentError("unknown selection '" + std::string(s) + "'");
}

ExampleOrdering parse_ordering(std::string_view s) {
  const std::string t = to_lower(trim(s));
  if (t == "random") return ExampleOrdering::kRandom;
  if (t == "ascending") return ExampleOrdering::kAscending;
  if (t == "descending") return ExampleOrdering::kDescending;
  throw ArgumentError("unknown ordering '" + std::string(s) + "'");
}

Visibility parse_visibility(std::string_view s) {
  const std::string t = to_lower(trim(s));
  if (t == "domains") return Visibility::kDomains;
  if (t == "urls") return Visibility::kUrls;
  throw ArgumentError("unknown visibility '" + std::string(s) + "'");
}

void IclConfig::validate() const {
  if (shots < 0) throw ArgumentError("shots must be >= 0");
  if (negatives_per_example < 0) throw ArgumentError("negatives_per_example must be >= 0");
  if (negative_max_attempts < 1) throw ArgumentError("negative_max_attempts must be >= 1");
  if (quality_filter_threshold) {
    if (*quality_filter_threshold < 0.0 || *quality_filter_threshold > 1.0) {
      throw ArgumentError("quality_filter_threshold must be in [0, 1]");
    }
    if (negatives_per_example < 1) {
      throw ArgumentError("quality filter needs negatives_per_example >= 1");
    }
  }
  if (ordering != ExampleOrdering::kRandom && selection != SelectionStrategy::kEmbeddingTopK) {
    throw ArgumentError("similarity ordering needs embedding_topk selection");
  }
}

std::string render_trace(const DomainTrace& trace, bool include_timing, Visibility visibility) {
  if (trace.empty()) throw ArgumentError("nothing to render");
  std::string out;
  for (const auto& e : trace.events()) {
    if (!out.empty()) out += '\n';
    out += "- ";
    out += e.domain;
    if (visibility == Visibility::kUrls && e.url_path && !e.url_path->empty()) {
      if (e.url_path->front() != '/') out += '/';
      out += *e.url_path;
    }
    if (include_timing) out += " @" + std::to_string(e.timestamp_ms) + "ms";
  }
  return out;
}

std::vector<IclExample> select_examples(std::span<const TracePromptPair> train,
                                        const DomainTrace& target, const IclConfig& cfg,
                                        EmbeddingProvider* embedder, std::uint64_t seed) {
  cfg.validate();
  if (cfg.shots == 0) return {};
  const auto shots = static_cast<std::size_t>(cfg.shots);

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& pair = train[i];
    if (target.prompt_id() && pair.prompt.id == *target.prompt_id()) continue;
    if (pair.trace.session_id() == target.session_id()) continue;
    if (pair.trace.empty()) continue;
    eligible.push_back(i);
  }
  if (eligible.size() < shots) {
    throw ArgumentError("need " + std::to_string(shots) + " training examples, have " +
                        std::to_string(eligible.size()));
  }

  Rng rng(seed);
  std::vector<IclExample> chosen;
  if (cfg.selection == SelectionStrategy::kRandom) {
    for (std::size_t idx : rng.sample_indices(eligible.size(), shots)) {
      chosen.push_back(IclExample{train[eligible[idx]], std::nullopt, {}});
    }
    rng.shuffle(chosen);
    return chosen;
  }

  if (embedder == nullptr) throw ArgumentError("embedding selection needs an embedder");
  const EmbeddingVector target_vec =
      embedder->embed(render_trace(target, cfg.include_timing, cfg.visibility));
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(eligible.size());
  for (std::size_t i : eligible) {
    const auto v = embedder->embed(render_trace(train[i].trace, cfg.include_timing, cfg.visibility));
    ranked.emplace_back(cosine_similarity(target_vec, v), i);
  }
  // Highest similarity first; ties keep training order.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  ranked.resize(shots);
  for (const auto& [sim, i] : ranked) chosen.push_back(IclExample{train[i], sim, {}});
  switch (cfg.ordering) {
    case ExampleOrdering::kDescending: break;
    case ExampleOrdering::kAscending: std::reverse(chosen.begin(), chosen.end()); break;
    case ExampleOrdering::kRandom: rng.shuffle(chosen); break;
  }
  return chosen;
}

namespace {

constexpr std::string_view kRecoveryObjective =
    "Objective:\n"
    "You are given a list of domains visited by a web agent during a browsing session.\n"
    "Your task is to reconstruct the most plausible **original user prompt** that would have "
    "caused the agent to visit these domains.\n"
    "This prompt should reflect the likely information need or task of the user, as inferred "
    "from the domains.\n";

constexpr std::string_view kRecoveryTail =
    "Now, for the following set of visited domains, reconstruct the most plausible original "
    "user prompt.\n\n"
    "Important: Only output the reconstructed prompt itself. Do not output the visited domains, "
    "reasoning, or any other text.\n\n"
    "Visited domains:\n";

constexpr std::string_view kContrastiveObjective =
    "Objective:\n"
    "You are given a list of domains visited by a web agent during a browsing session.\n"
    "Your task is to suggest a good, preferred prompt (query) for the information need that "
    "best matches the set of visited web domains provided.\n"
    "You will see examples with visited domains, a preferred (specific) query, multiple less "
    "preferred (vague or off-topic) queries, and reasoning.\n"
    "The preferred query should be specific, actionable, and match the domains content.\n"
    "The less preferred queries should be vague, off-topic, or missing critical details.\n";

constexpr std::string_view kContrastiveReasoning =
    "The preferred query is specific, actionable, and matches domains content. The less "
    "preferred queries are vague, off-topic, or missing critical details.";

constexpr std::string_view kContrastiveTail =
    "Now, for the following set of visited domains, suggest a good, preferred prompt (query) "
    "that best matches the information need implied by these domains.\n\n"
    "Important: Only output the preferred query itself. Do not output the less preferred query, "
    "reasoning, or any other text.\n\n"
    "Visited domains:\n";

std::string quote_text(std::string_view text) { return "\"" + std::string(trim(text)) + "\""; }

}  // namespace

ChatRequest build_recovery_prompt(std::span<const IclExample> examples,
                                  std::string_view target_rendering, const IclConfig& cfg) {
  if (trim(target_rendering).empty()) throw ArgumentError("nothing to render");
  const bool contrastive = cfg.negatives_per_example > 0 ||
                           std::any_of(examples.begin(), examples.end(),
                                       [](const IclExample& e) { return !e.negatives.empty(); });
  std::string out(contrastive ? kContrastiveObjective : kRecoveryObjective);
  if (!examples.empty()) {
    out += "Here are some examples:\n\n";
    for (std::size_t i = 0; i < examples.size(); ++i) {
      const auto& ex = examples[i];
      out += "Example " + std::to_string(i + 1) + ":\n";
      out += "Visited Domains:\n";
      out += render_trace(ex.pair.trace, cfg.include_timing, cfg.visibility);
      out += "\n\n";
      if (contrastive) {
        out += "Preferred Query:\n" + quote_text(ex.pair.prompt.text) + "\n\n";
        for (const auto& neg : ex.negatives) {
          out += "Less Preferred Query:\n" + quote_text(neg) + "\n\n";
        }
        out += "Reasoning:\n";
        out += kContrastiveReasoning;
        out += "\n\n";
      } else {
        out += "Reconstructed Prompt:\n" + quote_text(ex.pair.prompt.text) + "\n\n";
      }
    }
  } else {
    out += '\n';
  }
  out += contrastive ? kContrastiveTail : kRecoveryTail;
  out += target_rendering;
  out += contrastive ? "\n\nPreferred Query:" : "\n\nReconstructed Prompt:";
  return ChatRequest::for_role(Role::kRecovery, std::move(out));
}

ChatRequest build_negative_request(std::string_view prompt_text, int attempt) {
  std::string text =
      "Rewrite the following user prompt as a less preferred query: vague, off-topic, or "
      "missing the critical details, while still sounding like something a user might ask.\n"
      "Only output the rewritten query.\n\n"
      "Original prompt:\n" +
      quote_text(prompt_text) + "\n\nCandidate " + std::to_string(attempt) + ":";
  return ChatRequest::for_role(Role::kRewrite, std::move(text));
}

NegativeResult generate_negative(const PromptRecord& prompt, Backend& backend,
                                 std::optional<double> threshold, int max_attempts, int slot) {
  if (max_attempts < 1) throw ArgumentError("max_attempts must be >= 1");
  NegativeResult best;
  std::optional<EmbeddingVector> original;
  for (int i = 1; i <= max_attempts; ++i) {
    const int attempt = slot * max_attempts + i;
    std::string text = clean_model_output(
        backend.complete_text(build_negative_request(prompt.text, attempt)));
    if (text.empty()) throw EmptyResponseError("empty negative for prompt " + prompt.id);
    if (!threshold) return NegativeResult{std::move(text), std::nullopt, true, i};
    if (!original) original = backend.embed(prompt.text);
    const double sim = cosine_similarity(*original, backend.embed(text));
    if (sim < *threshold) return NegativeResult{std::move(text), sim, true, i};
    if (!best.similarity || sim < *best.similarity) {
      best.text = std::move(text);
      best.similarity = sim;
    }
  }
  best.threshold_met = false;
  best.attempts = max_attempts;
  return best;
}

std::string clean_model_output(std::string_view text) {
  std::string_view s = trim(text);
  for (std::string_view label : {"Reconstructed Prompt:", "Preferred Query:"}) {
    if (starts_with_icase(s, label)) {
      s = trim(s.substr(label.size()));
      break;
    }
  }
  return strip_quotes(s);
}

RecoveryResult recover_prompt(const DomainTrace& target, std::span<const TracePromptPair> train,
                              const IclConfig& cfg, Backend& backend, std::uint64_t item_index) {
  cfg.validate();
  const std::string rendering = render_trace(target, cfg.include_timing, cfg.visibility);
  BackendEmbedder embedder(backend);
  std::vector<IclExample> examples =
      select_examples(train, target, cfg, &embedder, cfg.rng_seed ^ item_index);

  RecoveryResult result;
  for (auto& ex : examples) {
    result.example_ids.push_back(ex.pair.prompt.id);
    for (int slot = 0; slot < cfg.negatives_per_example; ++slot) {
      NegativeResult neg = generate_negative(ex.pair.prompt, backend, cfg.quality_filter_threshold,
                                             cfg.negative_max_attempts, slot);
      if (!neg.threshold_met) {
        result.warnings.push_back("negative for " + ex.pair.prompt.id + ": threshold not met");
      }
      ex.negatives.push_back(std::move(neg.text));
    }
  }
  const Completion reply = backend.complete(build_recovery_prompt(examples, rendering, cfg));
  result.request_digest = reply.digest;
  result.text = clean_model_output(reply.text);
  if (result.text.empty()) throw EmptyResponseError("model reply was empty after cleaning");
  return result;
}

void export_finetune_dataset(std::span<const TracePromptPair> pairs,
                             const std::filesystem::path& path, const IclConfig& cfg) {
  if (pairs.empty()) throw ArgumentError("no pairs to export");
  IclConfig zero = cfg;
  zero.shots = 0;
  zero.negatives_per_example = 0;
  zero.quality_filter_threshold.reset();
  std::ostringstream out;
  for (const auto& pair : pairs) {
    const std::string rendering = render_trace(pair.trace, zero.include_timing, zero.visibility);
    const ChatRequest req = build_recovery_prompt({}, rendering, zero);
    const json rec = {
        {"messages",
         json::array({{{"role", "user"}, {"content", req.user_text}},
                      {{"role", "assistant"}, {"content", pair.prompt.text}}})}};
    out << rec.dump() << '\n';
  }
  write_file(path, out.str());
}

std::vector<FinetuneRecord> parse_finetune_dataset(std::string_view text) {
  static constexpr std::string_view kOpen = "Visited domains:\n";
  static constexpr std::string_view kClose = "\n\nReconstructed Prompt:";
  std::vector<FinetuneRecord> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    try {
      const json j = json::parse(line);
      const auto& msgs = j.at("messages");
      const std::string user = msgs.at(0).at("content").get<std::string>();
      const auto open = user.rfind(kOpen);
      const auto close = user.rfind(kClose);
      if (open == std::string::npos || close == std::string::npos || close < open) {
        throw std::invalid_argument("user message lacks a trace block");
      }
      const auto start = open + kOpen.size();
      out.push_back(FinetuneRecord{user.substr(start, close - start),
                                   msgs.at(1).at("content").get<std::string>()});
    } catch (const std::exception& ex) {
      throw ParseError("line " + std::to_string(line_no) + ": " + ex.what(), std::string(line),
                       line_no);
    }
  }
  return out;
}

}  // namespace wraleak
