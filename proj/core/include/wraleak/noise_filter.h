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
#ifndef WRALEAK_NOISE_FILTER_H_
#define WRALEAK_NOISE_FILTER_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "wraleak/trace.h"

namespace wraleak {

// 7 KB, binary kilobytes. Events at or above the threshold are kept.
inline constexpr std::int64_t kDefaultMinPayloadBytes = 7 * 1024;

struct FilterConfig {
  std::set<std::string> blocklist;
  std::int64_t min_payload_bytes = kDefaultMinPayloadBytes;

  // Built-in advertising/analytics list with the default threshold.
  static FilterConfig defaults();
  // Throws ArgumentError on a bad suffix or negative threshold.
  void validate() const;
};

// Ad and analytics services removed by default.
const std::set<std::string>& default_blocklist();

// One suffix per line; '#' starts a comment. Throws ParseError naming the
// line for entries that are not hostnames.
std::set<std::string> parse_blocklist(std::string_view text);
std::set<std::string> load_blocklist(const std::filesystem::path& path);

// domain == suffix, or domain ends with "." + suffix.
bool suffix_matches(std::string_view domain, std::string_view suffix);

bool is_blocked(std::string_view domain, const std::set<std::string>& blocklist);

// Keeps events that are not blocklisted and carry at least
// min_payload_bytes, in their original order.
DomainTrace filter_trace(const DomainTrace& trace, const FilterConfig& cfg);

}  // namespace wraleak

#endif  // WRALEAK_NOISE_FILTER_H_
