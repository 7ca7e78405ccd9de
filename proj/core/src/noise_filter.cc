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
#include "wraleak/noise_filter.h"

#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {

const std::set<std::string>& default_blocklist() {
  // Ad, consent and analytics hosts commonly seen in agent traces.
  static const std::set<std::string> kList = {
      "2mdn.net",          "adnxs.com",          "adsrvr.org",
      "amazon-adsystem.com", "bing.com",         "casalemedia.com",
      "chartbeat.com",     "chartbeat.net",      "cookielaw.org",
      "criteo.com",        "criteo.net",         "demdex.net",
      "doubleclick.net",   "google-analytics.com", "googleadservices.com",
      "googlesyndication.com", "googletagmanager.com", "googletagservices.com",
      "hotjar.com",        "moatads.com",        "newrelic.com",
      "nr-data.net",       "omtrdc.net",         "onetrust.com",
      "outbrain.com",      "pubmatic.com",       "quantserve.com",
      "rubiconproject.com", "scorecardresearch.com", "segment.io",
      "taboola.com",       "adsafeprotected.com", "krxd.net",
  };
  return kList;
}

FilterConfig FilterConfig::defaults() { return FilterConfig{default_blocklist(), kDefaultMinPayloadBytes}; }

void FilterConfig::validate() const {
  if (min_payload_bytes < 0) throw ArgumentError("min_payload_bytes must be >= 0");
  for (const auto& s : blocklist) {
    if (!is_valid_hostname(s)) throw ArgumentError("invalid blocklist entry '" + s + "'");
  }
}

std::set<std::string> parse_blocklist(std::string_view text) {
  std::set<std::string> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    std::string entry = to_lower(line);
    while (!entry.empty() && entry.front() == '.') entry.erase(0, 1);
    if (entry.empty() || !is_valid_hostname(entry)) {
      throw ParseError("line " + std::to_string(line_no) + ": invalid blocklist entry '" +
                           std::string(line) + "'",
                       std::string(line), line_no);
    }
    out.insert(std::move(entry));
  }
  return out;
}

std::set<std::string> load_blocklist(const std::filesystem::path& path) {
  try {
    return parse_blocklist(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.raw(), e.line());
  }
}

bool suffix_matches(std::string_view domain, std::string_view suffix) {
  if (suffix.empty() || domain.size() < suffix.size()) return false;
  if (domain == suffix) return true;
  return domain.size() > suffix.size() &&
         domain.substr(domain.size() - suffix.size()) == suffix &&
         domain[domain.size() - suffix.size() - 1] == '.';
}

bool is_blocked(std::string_view domain, const std::set<std::string>& blocklist) {
  // Walk the domain's label suffixes instead of scanning the whole list.
  std::string_view rest = domain;
  for (;;) {
    if (blocklist.find(std::string(rest)) != blocklist.end()) return true;
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos) return false;
    rest.remove_prefix(dot + 1);
  }
}

DomainTrace filter_trace(const DomainTrace& trace, const FilterConfig& cfg) {
  std::vector<TraceEvent> kept;
  kept.reserve(trace.size());
  for (const auto& e : trace.events()) {
    if (e.payload_bytes < cfg.min_payload_bytes) continue;
    if (is_blocked(e.domain, cfg.blocklist)) continue;
    kept.push_back(e);
  }
  return trace.with_events(std::move(kept));
}

}  // namespace wraleak
