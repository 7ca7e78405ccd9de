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
#include "wraleak/trace.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {

using nlohmann::json;

bool is_valid_hostname(std::string_view s) {
  if (s.empty() || contains_whitespace(s)) return false;
  if (s.find("://") != std::string_view::npos || s.find('/') != std::string_view::npos) {
    return false;
  }
  return std::none_of(s.begin(), s.end(), [](unsigned char c) { return std::isupper(c); });
}

std::string normalize_domain(std::string_view raw) {
  std::string_view s = trim(raw);
  if (const auto scheme = s.find("://"); scheme != std::string_view::npos) {
    s.remove_prefix(scheme + 3);
  }
  // Authority ends at the first path, query or fragment delimiter.
  if (const auto end = s.find_first_of("/?#"); end != std::string_view::npos) {
    s = s.substr(0, end);
  }
  if (const auto at = s.rfind('@'); at != std::string_view::npos) s.remove_prefix(at + 1);
  if (!s.empty() && s.front() == '[') {
    // Bracketed IPv6 literal.
    const auto close = s.find(']');
    s = close == std::string_view::npos ? s.substr(1) : s.substr(1, close - 1);
  } else if (const auto colon = s.rfind(':'); colon != std::string_view::npos) {
    s = s.substr(0, colon);
  }
  while (!s.empty() && s.back() == '.') s.remove_suffix(1);
  std::string host = to_lower(trim(s));
  if (host.empty() || !is_valid_hostname(host)) throw ArgumentError("no hostname");
  return host;
}

namespace {

void validate_event(const TraceEvent& e) {
  if (!is_valid_hostname(e.domain)) throw ArgumentError("invalid domain '" + e.domain + "'");
  if (e.timestamp_ms < 0) throw ArgumentError("timestamp_ms must be >= 0");
  if (e.payload_bytes < 0) throw ArgumentError("payload_bytes must be >= 0");
}

}  // namespace

DomainTrace::DomainTrace(std::string session_id, std::vector<TraceEvent> events,
                         std::optional<std::string> prompt_id,
                         std::optional<std::string> persona_id)
    : session_id_(std::move(session_id)),
      prompt_id_(std::move(prompt_id)),
      persona_id_(std::move(persona_id)),
      events_(std::move(events)) {
  if (session_id_.empty()) throw ArgumentError("session_id must be non-empty");
  for (const auto& e : events_) validate_event(e);
  std::stable_sort(events_.begin(), events_.end(), [](const TraceEvent& a, const TraceEvent& b) {
    return a.timestamp_ms < b.timestamp_ms;
  });
}

std::vector<std::string> DomainTrace::domains() const {
  std::vector<std::string> out;
  out.reserve(events_.size());
  for (const auto& e : events_) out.push_back(e.domain);
  return out;
}

DomainTrace DomainTrace::with_events(std::vector<TraceEvent> events) const {
  return DomainTrace(session_id_, std::move(events), prompt_id_, persona_id_);
}

MultiSessionTrace::MultiSessionTrace(std::string persona_id, std::vector<DomainTrace> sessions)
    : persona_id_(std::move(persona_id)), sessions_(std::move(sessions)) {
  if (sessions_.empty()) throw ArgumentError("multi-session trace needs at least one session");
  std::set<std::string> seen;
  for (const auto& s : sessions_) {
    if (!seen.insert(s.session_id()).second) {
      throw ArgumentError("duplicate session_id '" + s.session_id() + "'");
    }
  }
}

MultiSessionTrace MultiSessionTrace::prefix(std::size_t k) const {
  if (k == 0 || k > sessions_.size()) {
    throw ArgumentError("session prefix " + std::to_string(k) + " out of range 1.." +
                        std::to_string(sessions_.size()));
  }
  return MultiSessionTrace(persona_id_,
                           std::vector<DomainTrace>(sessions_.begin(), sessions_.begin() + k));
}

namespace {

std::int64_t required_int(const json& rec, const char* key) {
  const auto it = rec.find(key);
  if (it == rec.end()) throw std::invalid_argument(std::string("missing ") + key);
  if (!it->is_number_integer()) throw std::invalid_argument(std::string(key) + " is not an integer");
  return it->get<std::int64_t>();
}

std::optional<std::string> optional_string(const json& rec, const char* key) {
  const auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(std::string(key) + " is not a string");
  return it->get<std::string>();
}

}  // namespace

DomainTrace parse_trace_text(std::string_view text, std::string default_session_id) {
  std::string session_id = std::move(default_session_id);
  std::optional<std::string> prompt_id;
  std::optional<std::string> persona_id;
  std::vector<TraceEvent> events;
  bool any_record = false;

  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    try {
      const json rec = json::parse(line);
      if (!rec.is_object()) throw std::invalid_argument("record is not an object");
      any_record = true;
      if (!rec.contains("domain")) {
        if (auto v = optional_string(rec, "session_id")) session_id = *v;
        if (auto v = optional_string(rec, "prompt_id")) prompt_id = v;
        if (auto v = optional_string(rec, "persona_id")) persona_id = v;
        continue;
      }
      const auto& d = rec.at("domain");
      if (!d.is_string()) throw std::invalid_argument("domain is not a string");
      TraceEvent e;
      e.domain = d.get<std::string>();
      e.timestamp_ms = required_int(rec, "timestamp_ms");
      e.payload_bytes = required_int(rec, "payload_bytes");
      e.url_path = optional_string(rec, "url_path");
      validate_event(e);
      events.push_back(std::move(e));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ParseError("line " + std::to_string(line_no) + ": " + ex.what(), std::string(line),
                       line_no);
    }
  }
  if (!any_record) throw ParseError("empty trace");
  return DomainTrace(std::move(session_id), std::move(events), std::move(prompt_id),
                     std::move(persona_id));
}

DomainTrace parse_trace_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_trace_text(text, path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.raw(), e.line());
  }
}

std::string serialize_trace(const DomainTrace& trace) {
  std::ostringstream out;
  json header = {{"session_id", trace.session_id()}};
  if (trace.prompt_id()) header["prompt_id"] = *trace.prompt_id();
  if (trace.persona_id()) header["persona_id"] = *trace.persona_id();
  out << header.dump() << '\n';
  for (const auto& e : trace.events()) {
    json rec = {{"domain", e.domain},
                {"timestamp_ms", e.timestamp_ms},
                {"payload_bytes", e.payload_bytes}};
    if (e.url_path) rec["url_path"] = *e.url_path;
    out << rec.dump() << '\n';
  }
  return out.str();
}

void write_trace_file(const DomainTrace& trace, const std::filesystem::path& path) {
  write_file(path, serialize_trace(trace));
}

std::vector<DomainTrace> load_trace_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<DomainTrace> traces;
  traces.reserve(files.size());
  for (const auto& f : files) traces.push_back(parse_trace_file(f));
  std::stable_sort(traces.begin(), traces.end(), [](const DomainTrace& a, const DomainTrace& b) {
    return natural_less(a.session_id(), b.session_id());
  });
  return traces;
}

std::vector<MultiSessionTrace> group_by_persona(const std::vector<DomainTrace>& traces) {
  std::map<std::string, std::vector<DomainTrace>> groups;
  for (const auto& t : traces) {
    if (t.persona_id()) groups[*t.persona_id()].push_back(t);
  }
  std::vector<MultiSessionTrace> out;
  out.reserve(groups.size());
  for (auto& [persona, sessions] : groups) {
    std::stable_sort(sessions.begin(), sessions.end(),
                     [](const DomainTrace& a, const DomainTrace& b) {
                       return natural_less(a.session_id(), b.session_id());
                     });
    out.emplace_back(persona, std::move(sessions));
  }
  return out;
}

}  // namespace wraleak
