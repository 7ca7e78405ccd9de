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

#ifndef WRALEAK_TEXT_UTIL_H_
#define WRALEAK_TEXT_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wraleak {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);
bool starts_with_icase(std::string_view s, std::string_view prefix);
bool contains_whitespace(std::string_view s);

// Lowercased alphanumeric word tokens.
std::vector<std::string> word_tokens(std::string_view text);

// Orders strings by comparing digit runs numerically ("s2" < "s10").
bool natural_less(std::string_view a, std::string_view b);

// Counts non-overlapping occurrences of needle.
std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

// Counts lines that begin with prefix (after no trimming).
std::size_t count_line_prefix(std::string_view text, std::string_view prefix);

// Removes one pair of matching surrounding quotes (" ' or typographic) and
// surrounding whitespace, repeatedly.
std::string strip_quotes(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Renders a decimal with a fixed number of places ("0.492").
std::string format_fixed(double value, int places);

}  // namespace wraleak

#endif  // WRALEAK_TEXT_UTIL_H_
