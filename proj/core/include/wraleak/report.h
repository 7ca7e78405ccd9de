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
#ifndef WRALEAK_REPORT_H_
#define WRALEAK_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "wraleak/scorecard.h"

namespace wraleak {

enum class ReportFormat { kCsv, kMarkdown, kJsonl };
std::string_view to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view s);
std::string_view file_extension(ReportFormat f);

// Prompt-recovery scorecards render one row per scorecard with columns
// SBERT, LLM-Judge, E_func, E_dom, E_sem, T_ent (plus Utility when present).
// Trait scorecards render a category table (mean and median per scorecard,
// with a percentage delta column when exactly two are given) followed by a
// per-persona table. Decimals use three places. Throws ArgumentError when any
// scorecard's aggregate disagrees with its rows.
std::string render_report(std::span<const Scorecard> cards, ReportFormat format);

void emit_report(std::span<const Scorecard> cards, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace wraleak

#endif  // WRALEAK_REPORT_H_
