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

// Command-line front end: one verb per pipeline stage, composed via files.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wraleak/backend.h"
#include "wraleak/defense.h"
#include "wraleak/error.h"
#include "wraleak/harness.h"
#include "wraleak/noise_filter.h"
#include "wraleak/persona.h"
#include "wraleak/prompt.h"
#include "wraleak/prompt_recovery.h"
#include "wraleak/report.h"
#include "wraleak/scorecard.h"
#include "wraleak/text_util.h"
#include "wraleak/trace.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailed = 1;
constexpr int kExitUsage = 2;

// Overrides shared by the run verbs.
struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> shots;
  std::optional<int> decoys;
  std::optional<std::string> merge;
  std::optional<double> visibility;
  std::optional<std::size_t> sessions;
  std::optional<std::string> provider;
  std::optional<std::string> out;
  bool persona_conflict = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_defense_values) {
  cmd->add_option("--config", f.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--shots", f.shots, "ICL examples per recovery prompt");
  cmd->add_option("--sessions", f.sessions, "Use only the first N sessions per persona");
  cmd->add_option("--provider", f.provider, "Provider configuration (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--merge", f.merge, "Decoy merge mode")
      ->check(CLI::IsMember({"interleave", "shuffle"}));
  if (with_defense_values) {
    cmd->add_option("--decoys", f.decoys, "Decoy traces merged into each trace")->check(CLI::NonNegativeNumber);
    cmd->add_option("--visibility", f.visibility, "Fraction of events the observer sees")
        ->check(CLI::Range(0.0, 1.0));
  }
  cmd->add_flag("--persona-conflict", f.persona_conflict,
                "Draw decoy sessions from a conflicting persona");
}

wraleak::RunConfig resolve_config(const RunFlags& f) {
  wraleak::RunConfig cfg = wraleak::load_run_config(f.config);
  if (f.seed) {
    cfg.rng_seed = *f.seed;
    cfg.icl.rng_seed = *f.seed;
    if (cfg.defense) cfg.defense->rng_seed = *f.seed;
  }
  if (f.shots) cfg.icl.shots = *f.shots;
  if (f.sessions) cfg.sessions_limit = *f.sessions;
  if (f.provider) cfg.provider = fs::path(*f.provider);
  if (f.out) cfg.out_dir = fs::path(*f.out);
  if (f.decoys || f.merge || f.visibility || f.persona_conflict) {
    if (!cfg.defense) cfg.defense = wraleak::DefenseConfig{};
    cfg.defense->rng_seed = cfg.rng_seed;
    if (f.decoys) cfg.defense->decoy_count = *f.decoys;
    if (f.merge) cfg.defense->merge_mode = wraleak::parse_merge_mode(*f.merge);
    if (f.visibility) cfg.defense->visibility_fraction = *f.visibility;
    if (f.persona_conflict) cfg.defense->persona_conflict = true;
  }
  cfg.validate();
  return cfg;
}

std::unique_ptr<wraleak::Backend> backend_for(const std::optional<fs::path>& provider,
                                              const std::optional<fs::path>& out_dir) {
  wraleak::ProviderConfig pc;
  if (provider) pc = wraleak::load_provider_config(*provider);
  if (!pc.audit_log && out_dir) pc.audit_log = *out_dir / "audit.jsonl";
  return wraleak::make_backend(pc);
}

fs::path out_dir_or_default(const wraleak::RunConfig& cfg) {
  return cfg.out_dir.value_or(fs::path("out"));
}

void print_summary(const wraleak::Scorecard& card, const fs::path& dir) {
  std::cout << card.label << ": " << static_cast<int>(card.aggregate.at("n_ok")) << "/"
            << static_cast<int>(card.aggregate.at("n_items")) << " items ok";
  for (std::string_view k : {wraleak::kMetricSbert, wraleak::kMetricJudge, wraleak::kMetricSelected,
                             wraleak::kMetricUnselected}) {
    const auto it = card.aggregate.find(std::string(k));
    if (it != card.aggregate.end()) std::cout << ", " << k << "=" << wraleak::format_fixed(it->second, 3);
  }
  std::cout << " -> " << (dir / "scorecard.jsonl").string() << "\n";
  if (card.failed) std::cerr << "run marked failed: more than half the items errored\n";
}

wraleak::Scorecard run_and_write(const wraleak::RunConfig& cfg, wraleak::Backend& backend,
                                 const fs::path& dir) {
  fs::create_directories(dir);
  if (cfg.task == wraleak::Task::kPromptRecovery) {
    const auto data = wraleak::load_prompt_recovery_data(cfg);
    auto run = wraleak::run_prompt_recovery(cfg, data, backend);
    wraleak::write_run_artifacts(run, dir);
    return run.scorecard;
  }
  const auto data = wraleak::load_trait_inference_data(cfg);
  auto run = wraleak::run_trait_inference(cfg, data, backend);
  wraleak::write_run_artifacts(run, dir);
  return run.scorecard;
}

int cmd_run(const RunFlags& f, wraleak::Task expected) {
  wraleak::RunConfig cfg = resolve_config(f);
  if (cfg.task != expected) {
    throw wraleak::ArgumentError("config task is " + std::string(wraleak::to_string(cfg.task)) +
                                 ", verb expects " + std::string(wraleak::to_string(expected)));
  }
  const fs::path dir = out_dir_or_default(cfg);
  auto backend = backend_for(cfg.provider, dir);
  const auto card = run_and_write(cfg, *backend, dir);
  print_summary(card, dir);
  return card.failed ? kExitRunFailed : kExitOk;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    const std::string t(wraleak::trim(part));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

struct SweepFlags {
  RunFlags run;
  std::string decoy_list = "0,1,3,5";
  std::string visibility_list = "1.0";
  std::string format = "markdown";
};

int cmd_sweep(const SweepFlags& s) {
  const wraleak::RunConfig base = resolve_config(s.run);
  const fs::path root = out_dir_or_default(base);
  const auto format = wraleak::parse_report_format(s.format);
  std::vector<wraleak::Scorecard> cards;
  bool failed = false;
  for (const auto& d : split_csv(s.decoy_list)) {
    for (const auto& v : split_csv(s.visibility_list)) {
      wraleak::RunConfig cfg = base;
      if (!cfg.defense) cfg.defense = wraleak::DefenseConfig{};
      cfg.defense->rng_seed = cfg.rng_seed;
      cfg.defense->decoy_count = std::stoi(d);
      cfg.defense->visibility_fraction = std::stod(v);
      cfg.defense->validate();
      cfg.label = base.label + " decoys=" + d + " visibility=" + v;
      const fs::path dir = root / ("decoys" + d + "_vis" + v);
      auto backend = backend_for(cfg.provider, dir);
      cards.push_back(run_and_write(cfg, *backend, dir));
      print_summary(cards.back(), dir);
      failed = failed || cards.back().failed;
    }
  }
  const fs::path report = root / ("report" + std::string(wraleak::file_extension(format)));
  wraleak::emit_report(cards, format, report);
  std::cout << "report -> " << report.string() << "\n";
  return failed ? kExitRunFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metadata leakage toolkit for web research agents"};
  app.require_subcommand(1);

  // filter
  std::string filter_in, filter_out;
  std::optional<std::string> filter_blocklist;
  std::int64_t filter_min = wraleak::kDefaultMinPayloadBytes;
  auto* filter = app.add_subcommand("filter", "Drop ad/analytics and small-payload events");
  filter->add_option("--in", filter_in, "Trace file or directory")->required()->check(CLI::ExistingPath);
  filter->add_option("--out", filter_out, "Output file or directory")->required();
  filter->add_option("--blocklist", filter_blocklist, "Blocklist file")->check(CLI::ExistingFile);
  filter->add_option("--min-bytes", filter_min, "Minimum payload size in bytes");

  // attack
  auto* attack = app.add_subcommand("attack", "Run an attack over a dataset");
  attack->require_subcommand(1);
  RunFlags recover_flags, traits_flags;
  auto* recover = attack->add_subcommand("recover", "Prompt recovery from domain traces");
  add_run_flags(recover, recover_flags, true);
  auto* traits = attack->add_subcommand("traits", "Trait inference from multi-session traces");
  add_run_flags(traits, traits_flags, true);

  // defend
  auto* defend = app.add_subcommand("defend", "Evaluate defenses");
  defend->require_subcommand(1);
  SweepFlags sweep_flags;
  auto* sweep = defend->add_subcommand("sweep", "Re-run an attack across defense settings");
  add_run_flags(sweep, sweep_flags.run, false);
  sweep->add_option("--decoys", sweep_flags.decoy_list, "Comma-separated decoy counts");
  sweep->add_option("--visibility", sweep_flags.visibility_list, "Comma-separated visibility fractions");
  sweep->add_option("--format", sweep_flags.format, "Report format")
      ->check(CLI::IsMember({"csv", "markdown", "md", "jsonl"}));
  std::string util_query, util_report;
  std::optional<std::string> util_provider;
  auto* utility = defend->add_subcommand("utility", "Score a research report's utility");
  utility->add_option("--query", util_query, "Research question")->required();
  utility->add_option("--report", util_report, "Report text file")->required()->check(CLI::ExistingFile);
  utility->add_option("--provider", util_provider, "Provider configuration")->check(CLI::ExistingFile);

  // dataset
  auto* dataset = app.add_subcommand("dataset", "Prepare datasets");
  dataset->require_subcommand(1);
  std::string ds_in, ds_out;
  std::optional<std::string> ds_provider;
  auto* rewrite = dataset->add_subcommand("rewrite-dr", "Rewrite prompts into deep-research variants");
  rewrite->add_option("--in", ds_in, "Prompt file")->required()->check(CLI::ExistingFile);
  rewrite->add_option("--out", ds_out, "Output prompt file")->required();
  rewrite->add_option("--provider", ds_provider, "Provider configuration")->check(CLI::ExistingFile);
  auto* pq = dataset->add_subcommand("persona-queries", "Generate 7 sessions of queries per persona");
  pq->add_option("--in", ds_in, "Persona file")->required()->check(CLI::ExistingFile);
  pq->add_option("--out", ds_out, "Output file")->required();
  pq->add_option("--provider", ds_provider, "Provider configuration")->check(CLI::ExistingFile);
  std::string ft_config, ft_out;
  auto* ft = dataset->add_subcommand("export-ft", "Export training pairs in chat fine-tuning format");
  ft->add_option("--config", ft_config, "Prompt-recovery run configuration")->required()->check(CLI::ExistingFile);
  ft->add_option("--out", ft_out, "Output file")->required();

  // report
  std::vector<std::string> report_inputs;
  std::string report_format = "markdown";
  std::optional<std::string> report_out;
  auto* report = app.add_subcommand("report", "Render scorecards as tables");
  report->add_option("scorecards", report_inputs, "Scorecard files")->required()->check(CLI::ExistingFile);
  report->add_option("--format", report_format, "Output format")
      ->check(CLI::IsMember({"csv", "markdown", "md", "jsonl"}));
  report->add_option("--out", report_out, "Output file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*filter) {
      wraleak::FilterConfig fc = wraleak::FilterConfig::defaults();
      if (filter_blocklist) fc.blocklist = wraleak::load_blocklist(*filter_blocklist);
      fc.min_payload_bytes = filter_min;
      fc.validate();
      if (fs::is_directory(filter_in)) {
        std::size_t n = 0;
        for (const auto& t : wraleak::load_trace_dir(filter_in)) {
          wraleak::write_trace_file(wraleak::filter_trace(t, fc),
                                    fs::path(filter_out) / (t.session_id() + ".jsonl"));
          ++n;
        }
        std::cout << "filtered " << n << " traces -> " << filter_out << "\n";
      } else {
        const auto t = wraleak::parse_trace_file(filter_in);
        const auto f = wraleak::filter_trace(t, fc);
        wraleak::write_trace_file(f, filter_out);
        std::cout << "kept " << f.size() << "/" << t.size() << " events -> " << filter_out << "\n";
      }
      return kExitOk;
    }
    if (*recover) return cmd_run(recover_flags, wraleak::Task::kPromptRecovery);
    if (*traits) return cmd_run(traits_flags, wraleak::Task::kTraitInference);
    if (*sweep) return cmd_sweep(sweep_flags);
    if (*utility) {
      auto backend = backend_for(util_provider ? std::optional<fs::path>(*util_provider) : std::nullopt,
                                 std::nullopt);
      const auto rec = wraleak::utility_score(util_query, wraleak::read_file(util_report), *backend);
      json j = {{"research_question", rec.research_question},
                {"coverage_score", rec.coverage_score},
                {"depth_score", rec.depth_score},
                {"accuracy_score", rec.accuracy_score},
                {"clarity_score", rec.clarity_score},
                {"actionability_score", rec.actionability_score},
                {"overall_utility_score", rec.overall_utility_score},
                {"justification", rec.justification},
                {"warnings", rec.warnings}};
      std::cout << j.dump(2) << "\n";
      return kExitOk;
    }
    const std::optional<fs::path> provider =
        ds_provider ? std::optional<fs::path>(*ds_provider) : std::nullopt;
    if (*rewrite) {
      auto backend = backend_for(provider, std::nullopt);
      std::vector<wraleak::PromptRecord> out;
      for (const auto& p : wraleak::load_prompt_dataset(ds_in)) {
        out.push_back(wraleak::rewrite_dr_variant(p, *backend));
      }
      wraleak::write_prompt_dataset(out, ds_out);
      std::cout << "rewrote " << out.size() << " prompts -> " << ds_out << "\n";
      return kExitOk;
    }
    if (*pq) {
      auto backend = backend_for(provider, std::nullopt);
      std::ostringstream lines;
      std::size_t n = 0;
      for (const auto& p : wraleak::load_persona_file(ds_in)) {
        const auto sessions = wraleak::generate_persona_queries(p, *backend);
        lines << json{{"persona_id", p.persona_id}, {"sessions", sessions}}.dump() << "\n";
        ++n;
      }
      wraleak::write_file(ds_out, lines.str());
      std::cout << "generated queries for " << n << " personas -> " << ds_out << "\n";
      return kExitOk;
    }
    if (*ft) {
      const auto cfg = wraleak::load_run_config(ft_config);
      const auto data = wraleak::load_prompt_recovery_data(cfg);
      std::vector<wraleak::TracePromptPair> pairs;
      for (const auto& p : data.prompts) {
        if (p.split != wraleak::Split::kTrain) continue;
        for (const auto& t : data.traces) {
          if (t.prompt_id() != p.id) continue;
          auto f = wraleak::filter_trace(t, data.filter);
          if (!f.empty()) pairs.push_back({std::move(f), p});
          break;
        }
      }
      wraleak::export_finetune_dataset(pairs, ft_out, cfg.icl);
      std::cout << "exported " << pairs.size() << " records -> " << ft_out << "\n";
      return kExitOk;
    }
    if (*report) {
      std::vector<wraleak::Scorecard> cards;
      for (const auto& p : report_inputs) cards.push_back(wraleak::read_scorecard(p));
      const auto format = wraleak::parse_report_format(report_format);
      if (report_out) {
        wraleak::emit_report(cards, format, *report_out);
      } else {
        std::cout << wraleak::render_report(cards, format);
      }
      return kExitOk;
    }
  } catch (const wraleak::ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    if (!ex.raw().empty() && ex.raw().size() < 2000) std::cerr << "raw: " << ex.raw() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
