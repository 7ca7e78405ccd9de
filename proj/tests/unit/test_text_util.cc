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
#include <gtest/gtest.h>

#include "test_paths.h"
#include "wraleak/digest.h"
#include "wraleak/error.h"
#include "wraleak/text_util.h"

namespace wraleak {
namespace {

TEST(TextUtil, TrimAndLower) {
  EXPECT_EQ(trim("  a b \t\n"), "a b");
  EXPECT_EQ(trim(""), "");
  EXPECT_EQ(to_lower("MiXeD"), "mixed");
}

TEST(TextUtil, SplitLinesStripsCarriageReturns) {
  const auto lines = split_lines("a\r\nb\n\nc");
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "a");
  EXPECT_EQ(lines[2], "");
}

TEST(TextUtil, NaturalOrderComparesDigitRuns) {
  EXPECT_TRUE(natural_less("s2", "s10"));
  EXPECT_FALSE(natural_less("s10", "s2"));
  EXPECT_TRUE(natural_less("a", "b"));
}

TEST(TextUtil, CountsAreNonOverlapping) {
  EXPECT_EQ(count_occurrences("aaaa", "aa"), 2u);
  EXPECT_EQ(count_line_prefix("- x\n- y\nz", "- "), 2u);
}

TEST(TextUtil, StripQuotesRemovesMatchingPairs) {
  EXPECT_EQ(strip_quotes("\"'hi'\""), "hi");
  EXPECT_EQ(strip_quotes("“curly”"), "curly");
  EXPECT_EQ(strip_quotes("\"unbalanced"), "\"unbalanced");
}

TEST(TextUtil, FormatFixedAvoidsNegativeZero) {
  EXPECT_EQ(format_fixed(0.4925, 3), "0.492");
  EXPECT_EQ(format_fixed(-0.0001, 3), "0.000");
  EXPECT_EQ(format_fixed(1.0, 3), "1.000");
}

TEST(TextUtil, FileRoundTripAndMissingFile) {
  const auto dir = testenv::scratch_dir("text_util");
  write_file(dir / "nested" / "f.txt", "payload");
  EXPECT_EQ(read_file(dir / "nested" / "f.txt"), "payload");
  EXPECT_THROW(read_file(dir / "absent.txt"), IoError);
}

TEST(Digest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(short_digest("abc"), "ba7816bf8f01cfea");
}

}  // namespace
}  // namespace wraleak
