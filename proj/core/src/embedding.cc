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
#include "wraleak/embedding.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wraleak/error.h"
#include "wraleak/random.h"
#include "wraleak/text_util.h"

namespace wraleak {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ArgumentError("embedding dimension must be > 0");
}

double EmbeddingVector::norm() const {
  return std::sqrt(std::inner_product(values_.begin(), values_.end(), values_.begin(), 0.0));
}

EmbeddingVector EmbeddingVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw ArgumentError("cannot normalize the zero vector");
  std::vector<double> out(values_);
  for (double& v : out) v /= n;
  return EmbeddingVector(std::move(out));
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw ArgumentError("dimension mismatch: " + std::to_string(a.dimension()) + " vs " +
                        std::to_string(b.dimension()));
  }
  const auto av = a.values();
  const auto bv = b.values();
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    dot += av[i] * bv[i];
    na += av[i] * av[i];
    nb += bv[i] * bv[i];
  }
  if (na == 0.0 || nb == 0.0) throw ArgumentError("cosine of a zero vector");
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) throw ArgumentError("embedding dimension must be > 0");
}

void HashEmbeddingProvider::add_direction(std::vector<double>& acc, std::uint64_t key,
                                          double weight) const {
  std::uint64_t state = key ^ seed_;
  // Box-Muller over splitmix64 output keeps the stream platform independent.
  for (std::size_t i = 0; i < dimension_; i += 2) {
    const double u1 = (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    acc[i] += weight * r * std::cos(2.0 * std::numbers::pi * u2);
    if (i + 1 < dimension_) acc[i + 1] += weight * r * std::sin(2.0 * std::numbers::pi * u2);
  }
}

EmbeddingVector HashEmbeddingProvider::embed(std::string_view text) {
  if (trim(text).empty()) throw ArgumentError("cannot embed empty text");
  std::vector<double> acc(dimension_, 0.0);
  for (const auto& token : word_tokens(text)) add_direction(acc, fnv1a64(token), 1.0);
  // Whole-text component, so texts with equal token bags still differ.
  add_direction(acc, fnv1a64(text, 0x84222325cbf29ce4ULL), 0.35);
  return EmbeddingVector(std::move(acc)).normalized();
}

}  // namespace wraleak
