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
#ifndef WRALEAK_TRACE_H_
#define WRALEAK_TRACE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wraleak {

// One observed network event. domain is a bare lowercase hostname.
struct TraceEvent {
  std::string domain;
  std::int64_t timestamp_ms = 0;
  std::int64_t payload_bytes = 0;
  std::optional<std::string> url_path;

  bool operator==(const TraceEvent&) const = default;
};

// True when s satisfies the hostname invariants: non-empty, lowercase, no
// whitespace, no "://" and no '/'.
bool is_valid_hostname(std::string_view s);

// Lowercases and strips scheme, credentials, port, path, query and trailing
// dot. Throws ArgumentError("no hostname") when nothing is left.
std::string normalize_domain(std::string_view raw);

// An ordered session of events. Construction validates every event and
// stable-sorts by timestamp, so an instance always satisfies its invariants.
class DomainTrace {
 public:
  DomainTrace(std::string session_id, std::vector<TraceEvent> events,
              std::optional<std::string> prompt_id = std::nullopt,
              std::optional<std::string> persona_id = std::nullopt);

  const std::string& session_id() const { return session_id_; }
  const std::optional<std::string>& prompt_id() const { return prompt_id_; }
  // Set for sessions that belong to a multi-session persona trace.
  const std::optional<std::string>& persona_id() const { return persona_id_; }
  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  std::vector<std::string> domains() const;

  // Same identity, different events (re-validated and re-sorted).
  DomainTrace with_events(std::vector<TraceEvent> events) const;

  bool operator==(const DomainTrace&) const = default;

 private:
  std::string session_id_;
  std::optional<std::string> prompt_id_;
  std::optional<std::string> persona_id_;
  std::vector<TraceEvent> events_;
};

// All sessions observed for one persona, in session order.
class MultiSessionTrace {
 public:
  MultiSessionTrace(std::string persona_id, std::vector<DomainTrace> sessions);

  const std::string& persona_id() const { return persona_id_; }
  const std::vector<DomainTrace>& sessions() const { return sessions_; }
  std::size_t session_count() const { return sessions_.size(); }

  // The first k sessions. Throws ArgumentError if k is 0 or exceeds the count.
  MultiSessionTrace prefix(std::size_t k) const;

 private:
  std::string persona_id_;
  std::vector<DomainTrace> sessions_;
};

// Line-delimited trace records. Each non-empty line is a JSON object with
// domain, timestamp_ms, payload_bytes and optional url_path. A record without
// "domain" is a header that may set session_id, prompt_id and persona_id.
// default_session_id is used when no header names the session.
DomainTrace parse_trace_text(std::string_view text, std::string default_session_id);
DomainTrace parse_trace_file(const std::filesystem::path& path);
std::string serialize_trace(const DomainTrace& trace);
void write_trace_file(const DomainTrace& trace, const std::filesystem::path& path);

// Every *.jsonl trace file in a directory, ordered by session id.
std::vector<DomainTrace> load_trace_dir(const std::filesystem::path& dir);

// Groups sessions carrying a persona_id into multi-session traces, ordered by
// persona id; sessions inside a persona are naturally ordered by session id.
std::vector<MultiSessionTrace> group_by_persona(const std::vector<DomainTrace>& traces);

}  // namespace wraleak

#endif  // WRALEAK_TRACE_H_
