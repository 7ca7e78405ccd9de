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
#include "wraleak/prompt.h"

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {

using nlohmann::json;

std::string_view to_string(PromptDataset d) {
  switch (d) {
    case PromptDataset::kFedWeb13: return "FEDWEB13";
    case PromptDataset::kSession14: return "SESSION14";
    case PromptDataset::kDd16: return "DD16";
    case PromptDataset::kSynthetic: return "SYNTHETIC";
  }
  return "SYNTHETIC";
}

std::string_view to_string(PromptVariant v) {
  return v == PromptVariant::kOriginal ? "ORIGINAL" : "DR_REWRITTEN";
}

std::string_view to_string(Split s) { return s == Split::kTrain ? "train" : "test"; }

PromptDataset parse_prompt_dataset_tag(std::string_view s) {
  const std::string t = to_lower(trim(s));
  if (t == "fedweb13") return PromptDataset::kFedWeb13;
  if (t == "session14") return PromptDataset::kSession14;
  if (t == "dd16") return PromptDataset::kDd16;
  if (t == "synthetic") return PromptDataset::kSynthetic;
  throw ArgumentError("unknown dataset tag '" + std::string(s) + "'");
}

PromptVariant parse_prompt_variant(std::string_view s) {
  const std::string t = to_lower(trim(s));
  if (t == "original") return PromptVariant::kOriginal;
  if (t == "dr_rewritten" || t == "dr") return PromptVariant::kDrRewritten;
  throw ArgumentError("unknown prompt variant '" + std::string(s) + "'");
}

Split parse_split(std::string_view s) {
  const std::string t = to_lower(trim(s));
  if (t == "train") return Split::kTrain;
  if (t == "test") return Split::kTest;
  throw ArgumentError("unknown split '" + std::string(s) + "'");
}

std::vector<PromptRecord> parse_prompt_dataset(std::string_view text) {
  std::vector<PromptRecord> records;
  std::set<std::string> ids;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    PromptRecord rec;
    try {
      const json j = json::parse(line);
      rec.id = j.at("id").get<std::string>();
      rec.text = j.at("text").get<std::string>();
      rec.dataset = parse_prompt_dataset_tag(j.at("dataset").get<std::string>());
      if (j.contains("variant")) rec.variant = parse_prompt_variant(j["variant"].get<std::string>());
      if (j.contains("split")) rec.split = parse_split(j["split"].get<std::string>());
    } catch (const std::exception& ex) {
      throw ParseError("line " + std::to_string(line_no) + ": " + ex.what(), std::string(line),
                       line_no);
    }
    if (rec.id.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty id",
                                         std::string(line), line_no);
    if (trim(rec.text).empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty text", std::string(line),
                       line_no);
    }
    if (!ids.insert(rec.id).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate id '" + rec.id + "'",
                       std::string(line), line_no);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<PromptRecord> load_prompt_dataset(const std::filesystem::path& path) {
  try {
    return parse_prompt_dataset(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.raw(), e.line());
  }
}

std::string serialize_prompt_dataset(const std::vector<PromptRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    json j = {{"id", r.id},
              {"text", r.text},
              {"dataset", to_string(r.dataset)},
              {"variant", to_string(r.variant)},
              {"split", to_string(r.split)}};
    out << j.dump() << '\n';
  }
  return out.str();
}

void write_prompt_dataset(const std::vector<PromptRecord>& records,
                          const std::filesystem::path& path) {
  write_file(path, serialize_prompt_dataset(records));
}

}  // namespace wraleak
