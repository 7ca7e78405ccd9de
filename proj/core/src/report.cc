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
#include "wraleak/report.h"

#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {

using nlohmann::json;

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kMarkdown: return "markdown";
    case ReportFormat::kJsonl: return "jsonl";
  }
  return "csv";
}

ReportFormat parse_report_format(std::string_view s) {
  const std::string t = to_lower(trim(s));
  if (t == "csv") return ReportFormat::kCsv;
  if (t == "markdown" || t == "md") return ReportFormat::kMarkdown;
  if (t == "jsonl") return ReportFormat::kJsonl;
  throw ArgumentError("unknown report format '" + std::string(s) + "'");
}

std::string_view file_extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::kCsv: return ".csv";
    case ReportFormat::kMarkdown: return ".md";
    case ReportFormat::kJsonl: return ".jsonl";
  }
  return ".csv";
}

namespace {

// A cell is either text or a number rendered to three places.
struct Cell {
  std::string text;
  std::optional<double> number;
};

Cell text_cell(std::string s) { return Cell{std::move(s), std::nullopt}; }
Cell num_cell(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return Cell{"-", std::nullopt};
  return Cell{format_fixed(*v, 3), *v};
}

struct Table {
  std::string name;
  std::vector<std::string> keys;     // machine keys (CSV header, JSONL fields)
  std::vector<std::string> headers;  // markdown headers
  std::vector<std::vector<Cell>> rows;
};

std::optional<double> lookup(const Scorecard& card, const std::string& key) {
  const auto it = card.aggregate.find(key);
  if (it == card.aggregate.end()) return std::nullopt;
  return it->second;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

Table recovery_table(std::span<const Scorecard> cards) {
  bool utility = false;
  for (const auto& c : cards) utility = utility || c.aggregate.count(std::string(kMetricUtility));
  Table t;
  t.name = "prompt_recovery";
  t.keys = {"label", "n", "sbert", "llm_judge", "e_func", "e_dom", "e_sem", "t_ent"};
  t.headers = {"Run", "N", "SBERT", "LLM-Judge", "E_func", "E_dom", "E_sem", "T_ent"};
  if (utility) {
    t.keys.push_back("utility");
    t.headers.push_back("Utility");
  }
  for (const auto& c : cards) {
    std::vector<Cell> row = {text_cell(c.label),
                             text_cell(std::to_string(static_cast<long long>(
                                 lookup(c, "n_ok").value_or(0.0))))};
    for (std::string_view k : {kMetricSbert, kMetricJudge, kMetricFunc, kMetricDom, kMetricSem,
                               kMetricEnt}) {
      row.push_back(num_cell(lookup(c, std::string(k))));
    }
    if (utility) row.push_back(num_cell(lookup(c, std::string(kMetricUtility))));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table category_table(std::span<const Scorecard> cards) {
  Table t;
  t.name = "trait_categories";
  t.keys = {"category"};
  t.headers = {"Category"};
  for (const auto& c : cards) {
    t.keys.push_back(c.label + ":mean");
    t.keys.push_back(c.label + ":median");
    t.headers.push_back(c.label + " mean");
    t.headers.push_back(c.label + " median");
  }
  const bool delta = cards.size() == 2;
  if (delta) {
    t.keys.push_back("delta_pct");
    t.headers.push_back("Δ (%)");
  }
  std::vector<std::string> names;
  for (TraitCategory cat : kAllCategories) names.emplace_back(to_string(cat));
  names.emplace_back("selected");
  names.emplace_back("unselected");
  for (const auto& name : names) {
    std::vector<Cell> row = {text_cell(name)};
    std::vector<std::optional<double>> means;
    for (const auto& c : cards) {
      if (name == "selected" || name == "unselected") {
        const auto m = lookup(c, name + "_mean");
        means.push_back(m);
        row.push_back(num_cell(m));
        row.push_back(text_cell("-"));
      } else {
        const auto m = lookup(c, "category:" + name + ":mean");
        means.push_back(m);
        row.push_back(num_cell(m));
        row.push_back(num_cell(lookup(c, "category:" + name + ":median")));
      }
    }
    if (delta) {
      if (means[0] && means[1] && *means[0] != 0.0) {
        row.push_back(num_cell((*means[1] - *means[0]) / *means[0] * 100.0));
      } else {
        row.push_back(text_cell("-"));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table persona_table(std::span<const Scorecard> cards) {
  Table t;
  t.name = "trait_personas";
  t.keys = {"label", "persona_id", "selected_mean", "unselected_mean", "high_similarity_count",
            "conflicting_persona"};
  t.headers = {"Run", "Persona", "Selected", "Unselected", "Traits > 0.7", "Conflicting persona"};
  for (const auto& c : cards) {
    for (const auto& row : c.rows) {
      std::vector<Cell> cells = {text_cell(c.label), text_cell(row.item_id)};
      if (!row.ok) {
        cells.push_back(text_cell("error"));
        cells.push_back(text_cell("-"));
        cells.push_back(text_cell("-"));
      } else {
        const auto get = [&](std::string_view k) -> std::optional<double> {
          const auto it = row.metrics.find(std::string(k));
          if (it == row.metrics.end()) return std::nullopt;
          return it->second;
        };
        cells.push_back(num_cell(get(kMetricSelected)));
        cells.push_back(num_cell(get(kMetricUnselected)));
        const auto n = get(kMetricHighCount);
        cells.push_back(text_cell(n ? std::to_string(static_cast<long long>(*n)) : "-"));
      }
      const auto cp = row.fields.find("conflicting_persona");
      cells.push_back(text_cell(cp == row.fields.end() ? "-" : cp->second));
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

void render_table(const Table& t, ReportFormat format, std::ostringstream& out) {
  switch (format) {
    case ReportFormat::kCsv: {
      for (std::size_t i = 0; i < t.keys.size(); ++i) out << (i ? "," : "") << csv_escape(t.keys[i]);
      out << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i].text);
        out << '\n';
      }
      break;
    }
    case ReportFormat::kMarkdown: {
      out << "### " << t.name << "\n\n|";
      for (const auto& h : t.headers) out << ' ' << md_escape(h) << " |";
      out << "\n|";
      for (std::size_t i = 0; i < t.headers.size(); ++i) out << (i == 0 ? " --- |" : " ---: |");
      out << '\n';
      for (const auto& row : t.rows) {
        out << '|';
        for (const auto& c : row) out << ' ' << md_escape(c.text) << " |";
        out << '\n';
      }
      break;
    }
    case ReportFormat::kJsonl: {
      for (const auto& row : t.rows) {
        json j = {{"table", t.name}};
        for (std::size_t i = 0; i < row.size(); ++i) {
          // Parsing the rendered text keeps JSON numbers at three places.
          j[t.keys[i]] = row[i].number ? json::parse(row[i].text) : json(row[i].text);
        }
        out << j.dump() << '\n';
      }
      break;
    }
  }
}

}  // namespace

std::string render_report(std::span<const Scorecard> cards, ReportFormat format) {
  if (cards.empty()) throw ArgumentError("no scorecards to report");
  for (const auto& c : cards) {
    if (!aggregate_consistent(c)) {
      throw ArgumentError("scorecard '" + c.label + "' aggregate disagrees with its rows");
    }
  }
  std::vector<Scorecard> recovery, traits;
  for (const auto& c : cards) {
    (c.kind == ScorecardKind::kPromptRecovery ? recovery : traits).push_back(c);
  }
  std::vector<Table> tables;
  if (!recovery.empty()) tables.push_back(recovery_table(recovery));
  if (!traits.empty()) {
    tables.push_back(category_table(traits));
    tables.push_back(persona_table(traits));
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i > 0 && format != ReportFormat::kJsonl) out << '\n';
    render_table(tables[i], format, out);
  }
  return out.str();
}

void emit_report(std::span<const Scorecard> cards, ReportFormat format,
                 const std::filesystem::path& path) {
  write_file(path, render_report(cards, format));
}

}  // namespace wraleak
