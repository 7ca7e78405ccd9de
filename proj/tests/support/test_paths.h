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
#ifndef WRALEAK_TESTS_TEST_PATHS_H_
#define WRALEAK_TESTS_TEST_PATHS_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace testenv {

std::filesystem::path fixture_dir();
std::filesystem::path golden_dir();
// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(std::string_view name);

struct GoldenResult {
  bool ok = false;
  std::string message;
};

// Compares text with golden_dir()/name byte for byte. With
// WRALEAK_UPDATE_GOLDEN=1 the file is rewritten instead.
GoldenResult check_golden(std::string_view name, std::string_view text);

}  // namespace testenv

#endif  // WRALEAK_TESTS_TEST_PATHS_H_
