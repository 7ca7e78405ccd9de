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
#ifndef WRALEAK_TESTS_ORACLES_H_
#define WRALEAK_TESTS_ORACLES_H_

// Independent reference computations. Deliberately naive: nothing here calls
// into the library under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline double numeric_score(double pred, double truth, double scale) {
  const double d = pred > truth ? pred - truth : truth - pred;
  const double s = 1.0 - d / scale;
  return s < 0.0 ? 0.0 : s;
}

inline double ordinal_score(int pred, int truth) {
  return 1.0 - std::abs(pred - truth) / 4.0;
}

// Label-boundary suffix match, written without string_view tricks.
inline bool blocked(const std::string& domain, const std::set<std::string>& blocklist) {
  for (const auto& suffix : blocklist) {
    if (domain == suffix) return true;
    const std::string tail = "." + suffix;
    if (domain.size() > tail.size() &&
        domain.compare(domain.size() - tail.size(), tail.size(), tail) == 0) {
      return true;
    }
  }
  return false;
}

// Every interleaving of a and b that keeps both orders, by recursion.
template <typename T>
void interleavings(const std::vector<T>& a, const std::vector<T>& b, std::size_t i, std::size_t j,
                   std::vector<T>& cur, std::vector<std::vector<T>>& out) {
  if (i == a.size() && j == b.size()) {
    out.push_back(cur);
    return;
  }
  if (i < a.size()) {
    cur.push_back(a[i]);
    interleavings(a, b, i + 1, j, cur, out);
    cur.pop_back();
  }
  if (j < b.size()) {
    cur.push_back(b[j]);
    interleavings(a, b, i, j + 1, cur, out);
    cur.pop_back();
  }
}

template <typename T>
std::vector<std::vector<T>> all_interleavings(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<std::vector<T>> out;
  std::vector<T> cur;
  interleavings(a, b, 0, 0, cur, out);
  return out;
}

// True when sub appears in seq in order (not necessarily contiguous).
template <typename T>
bool is_subsequence(const std::vector<T>& sub, const std::vector<T>& seq) {
  std::size_t k = 0;
  for (const auto& x : seq) {
    if (k < sub.size() && sub[k] == x) ++k;
  }
  return k == sub.size();
}

inline std::size_t ceil_fraction(std::size_t n, double f) {
  // Exact for the decimal fractions used in tests: scale to integers first.
  const auto num = static_cast<std::uint64_t>(std::llround(f * 1000.0));
  const std::uint64_t scaled = num * n;
  return static_cast<std::size_t>((scaled + 999) / 1000);
}

}  // namespace oracle

#endif  // WRALEAK_TESTS_ORACLES_H_
