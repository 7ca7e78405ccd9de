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
#ifndef WRALEAK_PROMPT_H_
#define WRALEAK_PROMPT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wraleak {

enum class PromptDataset { kFedWeb13, kSession14, kDd16, kSynthetic };
enum class PromptVariant { kOriginal, kDrRewritten };
enum class Split { kTrain, kTest };

std::string_view to_string(PromptDataset d);
std::string_view to_string(PromptVariant v);
std::string_view to_string(Split s);
PromptDataset parse_prompt_dataset_tag(std::string_view s);
PromptVariant parse_prompt_variant(std::string_view s);
Split parse_split(std::string_view s);

struct PromptRecord {
  std::string id;
  std::string text;
  PromptDataset dataset = PromptDataset::kSynthetic;
  PromptVariant variant = PromptVariant::kOriginal;
  Split split = Split::kTrain;

  bool operator==(const PromptRecord&) const = default;
};

// Line-delimited records with id, text, dataset, and optional variant
// (default ORIGINAL) and split (default train). Duplicate ids and unknown tags
// are errors.
std::vector<PromptRecord> parse_prompt_dataset(std::string_view text);
std::vector<PromptRecord> load_prompt_dataset(const std::filesystem::path& path);
std::string serialize_prompt_dataset(const std::vector<PromptRecord>& records);
void write_prompt_dataset(const std::vector<PromptRecord>& records,
                          const std::filesystem::path& path);

}  // namespace wraleak

#endif  // WRALEAK_PROMPT_H_
