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
#include "test_paths.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace testenv {

std::filesystem::path fixture_dir() { return WRALEAK_FIXTURE_DIR; }
std::filesystem::path golden_dir() { return WRALEAK_GOLDEN_DIR; }

std::filesystem::path scratch_dir(std::string_view name) {
  const auto dir = std::filesystem::temp_directory_path() / ("wraleak_test_" + std::string(name));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

GoldenResult check_golden(std::string_view name, std::string_view text) {
  const auto path = golden_dir() / std::string(name);
  const char* update = std::getenv("WRALEAK_UPDATE_GOLDEN");
  if (update != nullptr && std::string(update) == "1") {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
    return {true, "updated " + path.string()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return {false, "missing golden file " + path.string()};
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string expected = buf.str();
  if (expected == text) return {true, ""};
  std::size_t at = 0;
  while (at < expected.size() && at < text.size() && expected[at] == text[at]) ++at;
  return {false, std::string(name) + " differs at byte " + std::to_string(at) + " (expected " +
                     std::to_string(expected.size()) + " bytes, got " +
                     std::to_string(text.size()) + ")"};
}

}  // namespace testenv
