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

#include "wraleak/harness.h"

#include <algorithm>
#include <atomic>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "wraleak/digest.h"
#include "wraleak/error.h"
#include "wraleak/obels.h"
#include "wraleak/random.h"
#include "wraleak/text_util.h"
#include "wraleak/trait_metrics.h"

namespace wraleak {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(Task t) {
  return t == Task::kPromptRecovery ? "prompt_recovery" : "trait_inference";
}

Task parse_task(std::string_view s) {
  const std::string t = to_lower(trim(s));
  if (t == "prompt_recovery" || t == "recover") return Task::kPromptRecovery;
  if (t == "trait_inference" || t == "traits") return Task::kTraitInference;
  throw ArgumentError("unknown task '" + std::string(s) + "'");
}

namespace {

fs::path resolve_path(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void check_keys(const json& j, const std::set<std::string>& allowed, std::string_view where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ArgumentError("unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

void require_exists(const fs::path& p, std::string_view what) {
  if (p.empty()) throw ArgumentError(std::string(what) + " path is not set");
  std::error_code ec;
  if (!fs::exists(p, ec)) {
    throw ArgumentError(std::string(what) + " not found: " + p.string());
  }
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. Results are written
// by index so completion order never matters.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string render_triplets(const std::vector<Triplet>& ts) {
  std::vector<std::string> lines;
  for (const auto& t : ts) lines.push_back(render_triplet(t));
  return join(lines, "\n");
}

ScorecardRow error_row(const std::string& id, const std::string& message) {
  ScorecardRow row;
  row.item_id = id;
  row.ok = false;
  row.error = message;
  return row;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("run config: ") + ex.what(), std::string(json_text));
  }
  if (!j.is_object()) throw ParseError("run config must be a JSON object", std::string(json_text));
  check_keys(j,
             {"task", "label", "seed", "prompts", "original_prompts", "traces", "personas",
              "decoy_traces", "keyword_map", "persona_pool", "blocklist", "min_payload_bytes",
              "sessions", "max_items", "metrics", "icl", "defense", "provider", "out"},
             "run config");
  RunConfig cfg;
  try {
    cfg.task = parse_task(j.at("task").get<std::string>());
    cfg.label = j.value("label", std::string(to_string(cfg.task)));
    cfg.rng_seed = j.value("seed", std::uint64_t{0});
    const auto path_of = [&](const char* key) -> std::optional<fs::path> {
      if (!j.contains(key) || j[key].is_null()) return std::nullopt;
      return resolve_path(base_dir, j[key].get<std::string>());
    };
    cfg.prompts = path_of("prompts").value_or(fs::path());
    cfg.original_prompts = path_of("original_prompts");
    cfg.traces = path_of("traces").value_or(fs::path());
    cfg.personas = path_of("personas").value_or(fs::path());
    cfg.decoy_traces = path_of("decoy_traces");
    cfg.keyword_map = path_of("keyword_map");
    cfg.persona_pool = path_of("persona_pool");
    cfg.blocklist = path_of("blocklist");
    cfg.provider = path_of("provider");
    cfg.out_dir = path_of("out");
    cfg.min_payload_bytes = j.value("min_payload_bytes", kDefaultMinPayloadBytes);
    if (j.contains("sessions") && !j["sessions"].is_null()) {
      cfg.sessions_limit = j["sessions"].get<std::size_t>();
    }
    if (j.contains("max_items") && !j["max_items"].is_null()) {
      cfg.max_items = j["max_items"].get<std::size_t>();
    }
    if (j.contains("metrics")) {
      const json& m = j["metrics"];
      check_keys(m, {"judge", "obels"}, "metrics");
      cfg.judge_metric = m.value("judge", true);
      cfg.obels_metric = m.value("obels", true);
    }
    if (j.contains("icl")) {
      const json& ic = j["icl"];
      check_keys(ic,
                 {"shots", "selection", "ordering", "negatives_per_example",
                  "quality_filter_threshold", "negative_max_attempts", "include_timing",
                  "visibility"},
                 "icl");
      cfg.icl.shots = ic.value("shots", cfg.icl.shots);
      if (ic.contains("selection")) cfg.icl.selection = parse_selection(ic["selection"].get<std::string>());
      if (ic.contains("ordering")) cfg.icl.ordering = parse_ordering(ic["ordering"].get<std::string>());
      cfg.icl.negatives_per_example = ic.value("negatives_per_example", 0);
      if (ic.contains("quality_filter_threshold") && !ic["quality_filter_threshold"].is_null()) {
        cfg.icl.quality_filter_threshold = ic["quality_filter_threshold"].get<double>();
      }
      cfg.icl.negative_max_attempts = ic.value("negative_max_attempts", cfg.icl.negative_max_attempts);
      cfg.icl.include_timing = ic.value("include_timing", false);
      if (ic.contains("visibility")) cfg.icl.visibility = parse_visibility(ic["visibility"].get<std::string>());
    }
    if (j.contains("defense") && !j["defense"].is_null()) {
      const json& d = j["defense"];
      check_keys(d, {"decoy_count", "merge", "visibility", "persona_conflict"}, "defense");
      DefenseConfig dc;
      dc.decoy_count = d.value("decoy_count", 0);
      if (d.contains("merge")) dc.merge_mode = parse_merge_mode(d["merge"].get<std::string>());
      dc.visibility_fraction = d.value("visibility", 1.0);
      dc.persona_conflict = d.value("persona_conflict", false);
      cfg.defense = dc;
    }
  } catch (const json::exception& ex) {
    throw ArgumentError(std::string("run config: ") + ex.what());
  }
  cfg.icl.rng_seed = cfg.rng_seed;
  if (cfg.defense) cfg.defense->rng_seed = cfg.rng_seed;
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(read_file(path), path.parent_path());
}

void RunConfig::validate() const {
  if (task == Task::kPromptRecovery) {
    require_exists(prompts, "prompts");
    icl.validate();
  } else {
    require_exists(personas, "personas");
  }
  require_exists(traces, "traces");
  for (const auto& [p, what] : {std::pair{original_prompts, "original prompts"},
                                std::pair{decoy_traces, "decoy traces"},
                                std::pair{keyword_map, "keyword map"},
                                std::pair{persona_pool, "persona pool"},
                                std::pair{blocklist, "blocklist"},
                                std::pair{provider, "provider config"}}) {
    if (p) require_exists(*p, what);
  }
  if (min_payload_bytes < 0) throw ArgumentError("min_payload_bytes must be >= 0");
  if (sessions_limit && *sessions_limit == 0) throw ArgumentError("sessions must be >= 1");
  if (max_items && *max_items == 0) throw ArgumentError("max_items must be >= 1");
  if (defense) {
    defense->validate();
    if (defense->persona_conflict && task == Task::kTraitInference && !keyword_map) {
      throw ArgumentError("persona_conflict needs a keyword_map");
    }
  }
  if (out_dir) {
    std::error_code ec;
    fs::create_directories(*out_dir, ec);
    if (ec || !fs::is_directory(*out_dir)) {
      throw ArgumentError("output directory not usable: " + out_dir->string());
    }
    const fs::path probe = *out_dir / ".wraleak-write-probe";
    try {
      write_file(probe, "");
    } catch (const IoError&) {
      throw ArgumentError("output directory not writable: " + out_dir->string());
    }
    fs::remove(probe, ec);
  }
}

std::string RunConfig::digest() const {
  // Paths are left out on purpose: moving a fixture tree keeps the digest.
  json j = {{"task", to_string(task)},
            {"seed", rng_seed},
            {"min_payload_bytes", min_payload_bytes},
            {"blocklist", blocklist ? blocklist->filename().string() : std::string("default")},
            {"sessions", sessions_limit ? json(*sessions_limit) : json(nullptr)},
            {"max_items", max_items ? json(*max_items) : json(nullptr)},
            {"judge", judge_metric},
            {"obels", obels_metric}};
  if (task == Task::kPromptRecovery) {
    j["icl"] = {{"shots", icl.shots},
                {"selection", to_string(icl.selection)},
                {"ordering", to_string(icl.ordering)},
                {"negatives", icl.negatives_per_example},
                {"threshold", icl.quality_filter_threshold
                                  ? json(format_fixed(*icl.quality_filter_threshold, 6))
                                  : json(nullptr)},
                {"negative_max_attempts", icl.negative_max_attempts},
                {"timing", icl.include_timing},
                {"visibility", to_string(icl.visibility)}};
  }
  j["defense"] = defense ? json(defense->digest()) : json(nullptr);
  return short_digest(j.dump());
}

PromptRecoveryData load_prompt_recovery_data(const RunConfig& cfg) {
  PromptRecoveryData data;
  data.prompts = load_prompt_dataset(cfg.prompts);
  if (cfg.original_prompts) data.originals = load_prompt_dataset(*cfg.original_prompts);
  data.traces = fs::is_directory(cfg.traces) ? load_trace_dir(cfg.traces)
                                             : std::vector<DomainTrace>{parse_trace_file(cfg.traces)};
  if (cfg.decoy_traces) data.decoy_pool = load_trace_dir(*cfg.decoy_traces);
  if (cfg.blocklist) data.filter.blocklist = load_blocklist(*cfg.blocklist);
  data.filter.min_payload_bytes = cfg.min_payload_bytes;
  data.filter.validate();
  return data;
}

TraitInferenceData load_trait_inference_data(const RunConfig& cfg) {
  TraitInferenceData data;
  data.personas = load_persona_file(cfg.personas);
  data.traces = group_by_persona(load_trace_dir(cfg.traces));
  data.pool = cfg.persona_pool ? load_persona_file(*cfg.persona_pool) : data.personas;
  if (cfg.keyword_map) data.keyword_rules = load_keyword_map(*cfg.keyword_map);
  if (cfg.blocklist) data.filter.blocklist = load_blocklist(*cfg.blocklist);
  data.filter.min_payload_bytes = cfg.min_payload_bytes;
  data.filter.validate();
  return data;
}

// ---------------------------------------------------------------------------
// Prompt recovery

namespace {

struct RecoveryItem {
  ScorecardRow row;
  std::optional<RecoveredPrompt> recovered;
};

// Decoy traces for one item. The candidate permutation depends only on the
// seed and the item, so larger decoy counts extend smaller ones.
std::vector<DomainTrace> pick_decoys(const PromptRecoveryData& data, const PromptRecord& prompt,
                                     int count, std::uint64_t seed) {
  std::vector<const DomainTrace*> candidates;
  const auto& source = data.decoy_pool.empty() ? data.traces : data.decoy_pool;
  for (const auto& t : source) {
    if (t.empty() || t.prompt_id() == prompt.id) continue;
    candidates.push_back(&t);
  }
  if (candidates.size() < static_cast<std::size_t>(count)) {
    throw ArgumentError("decoy pool has " + std::to_string(candidates.size()) + " traces, " +
                        std::to_string(count) + " needed");
  }
  Rng rng(seed ^ fnv1a64(prompt.id) ^ 0xdec0dec0ULL);
  rng.shuffle(candidates);
  std::vector<DomainTrace> out;
  for (int i = 0; i < count; ++i) out.push_back(*candidates[static_cast<std::size_t>(i)]);
  return out;
}

DomainTrace apply_defense(const DomainTrace& trace, std::span<const DomainTrace> decoys,
                          const DefenseConfig& d, std::uint64_t item_seed) {
  DomainTrace out = trace;
  if (!decoys.empty()) out = merge_traces(out, decoys, d.merge_mode, d.rng_seed ^ item_seed);
  if (d.visibility_fraction < 1.0) {
    out = mask_visibility(out, d.visibility_fraction, d.rng_seed ^ item_seed ^ 0x5151ULL);
  }
  return out;
}

RecoveryItem recover_one(const RunConfig& cfg, const PromptRecoveryData& data,
                         const std::vector<TracePromptPair>& train, const PromptRecord& prompt,
                         std::size_t index, Backend& backend, const std::string& config_digest) {
  RecoveryItem item;
  item.row.item_id = prompt.id;
  item.row.fields["config_digest"] = config_digest;
  try {
    const DomainTrace* raw = nullptr;
    for (const auto& t : data.traces) {
      if (t.prompt_id() == prompt.id) {
        raw = &t;
        break;
      }
    }
    if (raw == nullptr) throw ArgumentError("no trace for prompt");
    std::string original = prompt.text;
    if (prompt.variant != PromptVariant::kOriginal) {
      const auto it = std::find_if(data.originals.begin(), data.originals.end(),
                                   [&](const PromptRecord& p) { return p.id == prompt.id; });
      if (it == data.originals.end()) throw ArgumentError("no original text for rewritten prompt");
      original = it->text;
    }

    DomainTrace observed = *raw;
    if (cfg.defense && !cfg.defense->is_identity()) {
      const std::uint64_t item_seed = fnv1a64(prompt.id);
      const auto decoys = pick_decoys(data, prompt, cfg.defense->decoy_count, cfg.defense->rng_seed);
      observed = apply_defense(*raw, decoys, *cfg.defense, item_seed);
      item.row.fields["defense_digest"] = cfg.defense->digest();
    }
    const DomainTrace filtered = filter_trace(observed, data.filter);
    if (filtered.empty()) throw ArgumentError("trace empty after filtering");
    item.row.fields["events"] = std::to_string(filtered.size());

    const RecoveryResult result = recover_prompt(filtered, train, cfg.icl, backend, index);
    item.row.fields["recovered"] = result.text;
    item.row.fields["request_digest"] = result.request_digest;
    item.row.fields["example_ids"] = join(result.example_ids, ",");
    if (!result.warnings.empty()) item.row.fields["warnings"] = join(result.warnings, "; ");

    BackendEmbedder embedder(backend);
    item.row.metrics[std::string(kMetricSbert)] = embedding_metric(original, result.text, embedder);
    if (cfg.judge_metric) {
      item.row.metrics[std::string(kMetricJudge)] = llm_judge_metric(original, result.text, backend);
    }
    if (cfg.obels_metric) {
      const auto a = abstract_triplets(original, backend);
      const auto b = abstract_triplets(result.text, backend);
      const ObelsScores s = score_obels(a, b, backend);
      item.row.metrics[std::string(kMetricFunc)] = s.functional_equivalence;
      item.row.metrics[std::string(kMetricDom)] = s.domain_type_equivalence;
      item.row.metrics[std::string(kMetricSem)] = s.semantic_equivalence;
      item.row.metrics[std::string(kMetricEnt)] = s.entity_granularity_tolerance;
      item.row.fields["triplets_original"] = render_triplets(a);
      item.row.fields["triplets_recovered"] = render_triplets(b);
      json aligned = json::array();
      for (const auto& [x, y] : s.aligned_triplets) {
        aligned.push_back({render_triplet(x), render_triplet(y)});
      }
      item.row.fields["aligned_triplets"] = aligned.dump();
      if (!s.warnings.empty()) item.row.fields["obels_warnings"] = join(s.warnings, "; ");
    }
    item.recovered = RecoveredPrompt{prompt.id, config_digest, result.text, result.request_digest};
  } catch (const std::exception& ex) {
    ScorecardRow row = error_row(prompt.id, ex.what());
    row.fields["config_digest"] = config_digest;
    item.row = std::move(row);
    item.recovered.reset();
  }
  return item;
}

}  // namespace

PromptRecoveryRun run_prompt_recovery(const RunConfig& cfg, const PromptRecoveryData& data,
                                      Backend& backend) {
  cfg.icl.validate();
  if (cfg.defense) cfg.defense->validate();

  std::vector<TracePromptPair> train;
  std::vector<PromptRecord> tests;
  for (const auto& p : data.prompts) {
    if (p.split == Split::kTest) {
      tests.push_back(p);
      continue;
    }
    for (const auto& t : data.traces) {
      if (t.prompt_id() != p.id) continue;
      DomainTrace filtered = filter_trace(t, data.filter);
      if (!filtered.empty()) train.push_back(TracePromptPair{std::move(filtered), p});
      break;
    }
  }
  if (cfg.max_items && tests.size() > *cfg.max_items) tests.resize(*cfg.max_items);
  if (tests.empty()) throw ArgumentError("no test prompts");

  const std::string digest = cfg.digest();
  std::vector<RecoveryItem> items(tests.size());
  parallel_for(tests.size(), backend.max_in_flight(), [&](std::size_t i) {
    items[i] = recover_one(cfg, data, train, tests[i], i, backend, digest);
  });

  PromptRecoveryRun run;
  run.scorecard.kind = ScorecardKind::kPromptRecovery;
  run.scorecard.label = cfg.label;
  run.scorecard.config_digest = digest;
  for (auto& item : items) {
    run.scorecard.rows.push_back(std::move(item.row));
    if (item.recovered) run.recovered.push_back(std::move(*item.recovered));
  }
  std::stable_sort(run.recovered.begin(), run.recovered.end(),
                   [](const RecoveredPrompt& a, const RecoveredPrompt& b) {
                     return natural_less(a.item_id, b.item_id);
                   });
  finalize_scorecard(run.scorecard);
  return run;
}

// ---------------------------------------------------------------------------
// Trait inference

namespace {

const MultiSessionTrace* find_trace(const std::vector<MultiSessionTrace>& traces,
                                    const std::string& persona_id) {
  for (const auto& t : traces) {
    if (t.persona_id() == persona_id) return &t;
  }
  return nullptr;
}

MultiSessionTrace filter_sessions(const MultiSessionTrace& trace, const FilterConfig& filter) {
  std::vector<DomainTrace> sessions;
  for (const auto& s : trace.sessions()) sessions.push_back(filter_trace(s, filter));
  return MultiSessionTrace(trace.persona_id(), std::move(sessions));
}

struct TraitItem {
  ScorecardRow row;
  std::optional<TraitPredictionRecord> record;
};

TraitItem infer_one(const RunConfig& cfg, const TraitInferenceData& data,
                    const std::vector<TraitExample>& examples, const PersonaProfile& persona,
                    Backend& backend, const std::string& config_digest) {
  TraitItem item;
  item.row.item_id = persona.persona_id;
  item.row.fields["config_digest"] = config_digest;
  std::optional<std::string> conflicting;
  try {
    const MultiSessionTrace* raw = find_trace(data.traces, persona.persona_id);
    if (raw == nullptr) throw ArgumentError("no trace for persona");
    MultiSessionTrace observed = *raw;

    if (cfg.defense && !cfg.defense->is_identity()) {
      const DefenseConfig& d = *cfg.defense;
      const std::uint64_t persona_seed = fnv1a64(persona.persona_id);
      // Decoy sessions come either from one conflicting persona or from a
      // seeded draw over every other persona's sessions.
      std::vector<const DomainTrace*> source;
      if (d.persona_conflict) {
        std::vector<PersonaProfile> pool;
        for (const auto& p : data.pool) {
          if (p.persona_id != persona.persona_id) pool.push_back(p);
        }
        const TraitEstimate estimate = estimate_traits_keywords(raw->sessions(), data.keyword_rules);
        const PersonaProfile& other = select_conflicting_persona(estimate, pool);
        conflicting = other.persona_id;
        const MultiSessionTrace* other_trace = find_trace(data.traces, other.persona_id);
        if (other_trace == nullptr || other_trace->session_count() == 0) {
          throw ArgumentError("no trace for conflicting persona " + other.persona_id);
        }
        for (const auto& s : other_trace->sessions()) source.push_back(&s);
      } else {
        for (const auto& t : data.traces) {
          if (t.persona_id() == persona.persona_id) continue;
          for (const auto& s : t.sessions()) source.push_back(&s);
        }
        Rng rng(d.rng_seed ^ persona_seed ^ 0xdec0dec0ULL);
        rng.shuffle(source);
      }
      const int per_session = std::max(d.decoy_count, d.persona_conflict ? 1 : 0);
      if (per_session > 0 && source.empty()) throw ArgumentError("no decoy sessions available");
      std::vector<DomainTrace> sessions;
      for (std::size_t i = 0; i < raw->session_count(); ++i) {
        std::vector<DomainTrace> decoys;
        for (int k = 0; k < per_session; ++k) {
          const std::size_t at = d.persona_conflict
                                     ? (i + static_cast<std::size_t>(k)) % source.size()
                                     : (i * static_cast<std::size_t>(per_session) +
                                        static_cast<std::size_t>(k)) % source.size();
          decoys.push_back(*source[at]);
        }
        sessions.push_back(apply_defense(raw->sessions()[i], decoys, d, persona_seed ^ i));
      }
      observed = MultiSessionTrace(raw->persona_id(), std::move(sessions));
      item.row.fields["defense_digest"] = d.digest();
      if (conflicting) item.row.fields["conflicting_persona"] = *conflicting;
    }

    const MultiSessionTrace filtered = filter_sessions(observed, data.filter);
    const TraitInferenceResult result = infer_traits(filtered, examples, backend, cfg.sessions_limit);
    BackendEmbedder embedder(backend);
    const PersonaTraitReport report =
        score_persona(result.prediction, persona, TraitSchema::standard(), embedder);

    for (const auto& [key, score] : report.scores) {
      item.row.metrics[std::string(kTraitPrefix) + key] = score.score;
    }
    item.row.metrics[std::string(kMetricSelected)] = report.selected_mean;
    item.row.metrics[std::string(kMetricUnselected)] = report.unselected_mean;
    item.row.metrics[std::string(kMetricHighCount)] = report.high_similarity_count;
    item.row.fields["sessions_used"] = std::to_string(result.sessions_used);
    item.row.fields["request_digest"] = result.request_digest;
    item.row.fields["unparsed_lines"] = std::to_string(result.prediction.unparsed_lines.size());
    std::vector<std::string> notes = result.prediction.notes;
    for (const auto& [key, score] : report.scores) {
      if (!score.note.empty()) notes.push_back(key + ": " + score.note);
    }
    if (!notes.empty()) item.row.fields["notes"] = join(notes, "; ");

    TraitPredictionRecord record;
    record.persona_id = persona.persona_id;
    record.sessions_used = result.sessions_used;
    record.prediction = result.prediction;
    record.prediction.persona_id = persona.persona_id;
    record.request_digest = result.request_digest;
    record.conflicting_persona = conflicting;
    item.record = std::move(record);
  } catch (const std::exception& ex) {
    ScorecardRow row = error_row(persona.persona_id, ex.what());
    row.fields["config_digest"] = config_digest;
    if (conflicting) row.fields["conflicting_persona"] = *conflicting;
    item.row = std::move(row);
    item.record.reset();
  }
  return item;
}

}  // namespace

TraitInferenceRun run_trait_inference(const RunConfig& cfg, const TraitInferenceData& data,
                                      Backend& backend) {
  if (cfg.defense) cfg.defense->validate();
  if (data.personas.empty()) throw ArgumentError("no personas");

  std::vector<TraitExample> examples;
  std::vector<PersonaProfile> tests;
  for (const auto& p : data.personas) {
    if (p.split != "icl") {
      tests.push_back(p);
      continue;
    }
    const MultiSessionTrace* t = find_trace(data.traces, p.persona_id);
    if (t == nullptr) throw ArgumentError("no trace for ICL persona " + p.persona_id);
    examples.push_back(TraitExample{filter_sessions(*t, data.filter), p});
  }
  if (examples.size() != kTraitIclShots) {
    throw ArgumentError("expected " + std::to_string(kTraitIclShots) + " ICL personas, found " +
                        std::to_string(examples.size()));
  }
  if (cfg.max_items && tests.size() > *cfg.max_items) tests.resize(*cfg.max_items);
  if (tests.empty()) throw ArgumentError("no test personas");

  const std::string digest = cfg.digest();
  std::vector<TraitItem> items(tests.size());
  parallel_for(tests.size(), backend.max_in_flight(), [&](std::size_t i) {
    items[i] = infer_one(cfg, data, examples, tests[i], backend, digest);
  });

  TraitInferenceRun run;
  run.scorecard.kind = ScorecardKind::kTraitInference;
  run.scorecard.label = cfg.label;
  run.scorecard.config_digest = digest;
  for (auto& item : items) {
    run.scorecard.rows.push_back(std::move(item.row));
    if (item.record) run.predictions.push_back(std::move(*item.record));
  }
  std::stable_sort(run.predictions.begin(), run.predictions.end(),
                   [](const TraitPredictionRecord& a, const TraitPredictionRecord& b) {
                     return natural_less(a.persona_id, b.persona_id);
                   });
  finalize_scorecard(run.scorecard);
  return run;
}

void write_run_artifacts(const PromptRecoveryRun& run, const fs::path& dir) {
  std::ostringstream out;
  for (const auto& r : run.recovered) {
    out << json{{"item_id", r.item_id},
                {"config_digest", r.config_digest},
                {"recovered", r.text},
                {"request_digest", r.request_digest}}
               .dump()
        << '\n';
  }
  write_file(dir / "recovered.jsonl", out.str());
  write_scorecard(run.scorecard, dir / "scorecard.jsonl");
}

void write_run_artifacts(const TraitInferenceRun& run, const fs::path& dir) {
  std::ostringstream out;
  for (const auto& r : run.predictions) {
    json predicted = json::object();
    for (const auto& [key, value] : r.prediction.predicted) predicted[key] = value.raw;
    json j = {{"persona_id", r.persona_id},
              {"sessions_used", r.sessions_used},
              {"request_digest", r.request_digest},
              {"predicted", predicted},
              {"unparsed_lines", r.prediction.unparsed_lines},
              {"notes", r.prediction.notes}};
    j["conflicting_persona"] = r.conflicting_persona ? json(*r.conflicting_persona) : json(nullptr);
    out << j.dump() << '\n';
  }
  write_file(dir / "predictions.jsonl", out.str());
  write_scorecard(run.scorecard, dir / "scorecard.jsonl");
}

// ---------------------------------------------------------------------------
// Dataset preparation

ChatRequest build_rewrite_request(std::string_view prompt_text) {
  std::string text =
      "Rewrite the user prompt below as a request for a deep research agent. Spell out the goal, "
      "the scope, the kinds of sources worth consulting and the form the answer should take. "
      "Do not add facts the user did not give. Output only the rewritten prompt.\n\n"
      "Original prompt:\n\"";
  text += prompt_text;
  text += "\"\n\nRewritten prompt:";
  return ChatRequest::for_role(Role::kRewrite, std::move(text));
}

PromptRecord rewrite_dr_variant(const PromptRecord& prompt, Backend& backend) {
  if (prompt.variant != PromptVariant::kOriginal) {
    throw ArgumentError("prompt " + prompt.id + " is already a rewritten variant");
  }
  const std::string reply = backend.complete_text(build_rewrite_request(prompt.text));
  std::string text = clean_model_output(reply);
  if (text.empty()) throw EmptyResponseError("empty rewrite for prompt " + prompt.id);
  PromptRecord out = prompt;
  out.text = std::move(text);
  out.variant = PromptVariant::kDrRewritten;
  return out;
}

ChatRequest build_persona_query_request(const PersonaProfile& persona, const TraitSchema& schema) {
  validate_persona(persona, schema);
  std::vector<std::string> selected;
  bool big_five_done = false;
  for (const auto& key : persona.selected_traits) {
    if (std::find(kBigFiveKeys.begin(), kBigFiveKeys.end(), key) != kBigFiveKeys.end()) {
      if (big_five_done) continue;
      big_five_done = true;
      std::map<std::string, int> levels;
      for (auto dim : kBigFiveKeys) {
        const TraitValue* v = persona.trait(dim);
        if (v && v->ordinal_level) levels[std::string(dim)] = *v->ordinal_level;
      }
      selected.push_back("Big Five Scores: " + render_big_five(levels));
      continue;
    }
    selected.push_back(schema.at(key).display_name + ": " + persona.trait(key)->raw);
  }
  json traits = json::object();
  for (std::size_t i = 0; i < selected.size(); ++i) {
    traits["trait_" + std::to_string(i + 1)] = selected[i];
  }

  std::string text =
      "You are simulating a user with the following profile. Your task is to write realistic web "
      "search queries across 7 sessions that this person might ask an AI browsing assistant.\n\n"
      "The goal is to ensure that the following 5 selected traits are naturally embedded in the "
      "queries. The queries may explicitly mention or implicitly suggest these traits.\n\n"
      "----\nPersona Summary:\n";
  text += persona_summary(persona, schema);
  text += "\n\nSelected Traits:\n";
  text += traits.dump(2);
  text +=
      "\n----\n\nInstructions:\n\n"
      "1. Generate 3–5 realistic, informative web queries for each of 7 sessions.\n"
      "2. Across all sessions, ensure that each of the selected traits is revealed through at "
      "least one query.\n"
      "3. Avoid listing traits directly — instead, embed them naturally in the context of the "
      "queries.\n"
      "4. Your output should start with \"User prompt:\" and format the queries session-wise as:\n\n"
      "User prompt:\nSession 1:\n- ...\n- ...\n\n...\n\nSession 7:\n- ...\n";
  return ChatRequest::for_role(Role::kPersona, std::move(text));
}

std::vector<std::vector<std::string>> parse_persona_queries(std::string_view reply) {
  static const std::regex kSession(R"(^\**\s*session\s*(\d+)\s*\**\s*:?\s*\**$)",
                                   std::regex::icase);
  static const std::regex kQuery(R"(^(?:[-*•]|\d+[.)])\s*(.+)$)");
  const std::string raw(reply);
  std::string_view body = trim(reply);
  if (starts_with_icase(body, "user prompt:")) body = trim(body.substr(12));

  std::vector<std::vector<std::string>> sessions;
  std::smatch m;
  for (const auto& line_raw : split_lines(body)) {
    const std::string line(trim(line_raw));
    if (line.empty()) continue;
    if (std::regex_match(line, m, kSession)) {
      const auto n = std::stoul(m[1].str());
      if (n != sessions.size() + 1) {
        throw StructureError("session " + std::to_string(n) + " out of order", raw);
      }
      sessions.emplace_back();
      continue;
    }
    if (std::regex_match(line, m, kQuery)) {
      if (sessions.empty()) throw StructureError("query before the first session header", raw);
      const std::string q = strip_quotes(trim(m[1].str()));
      if (!q.empty()) sessions.back().push_back(q);
    }
    // Any other prose is ignored.
  }
  if (sessions.size() != kPersonaSessions) {
    throw StructureError("expected " + std::to_string(kPersonaSessions) + " sessions, found " +
                             std::to_string(sessions.size()),
                         raw);
  }
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const std::size_t n = sessions[i].size();
    if (n < kMinQueriesPerSession || n > kMaxQueriesPerSession) {
      throw StructureError("session " + std::to_string(i + 1) + " has " + std::to_string(n) +
                               " queries, expected 3-5",
                           raw);
    }
  }
  return sessions;
}

std::vector<std::vector<std::string>> generate_persona_queries(const PersonaProfile& persona,
                                                               Backend& backend,
                                                               const TraitSchema& schema) {
  return parse_persona_queries(backend.complete_text(build_persona_query_request(persona, schema)));
}

}  // namespace wraleak
