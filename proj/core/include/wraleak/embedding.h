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
#ifndef WRALEAK_EMBEDDING_H_
#define WRALEAK_EMBEDDING_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace wraleak {

class EmbeddingVector {
 public:
  // Throws ArgumentError for an empty vector.
  explicit EmbeddingVector(std::vector<double> values);

  std::size_t dimension() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double norm() const;
  // Throws ArgumentError for the zero vector.
  EmbeddingVector normalized() const;

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> values_;
};

// dot(a, b) / (|a| |b|), clamped to [-1, 1]. Throws ArgumentError on a
// dimension mismatch or a zero vector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  // Throws ArgumentError for empty text.
  virtual EmbeddingVector embed(std::string_view text) = 0;
  virtual std::size_t dimension() const = 0;
};

// Offline stand-in for a sentence encoder. Each lowercase word token maps to
// a hash-seeded Gaussian direction; a text embeds as the sum of its token
// directions plus a smaller whole-text direction, normalized to the unit
// sphere. Shared words raise similarity, and distinct texts never collide.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDefaultDimension = 384;

  explicit HashEmbeddingProvider(std::size_t dimension = kDefaultDimension,
                                 std::uint64_t seed = 0x5eed);

  EmbeddingVector embed(std::string_view text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  void add_direction(std::vector<double>& acc, std::uint64_t key, double weight) const;

  std::size_t dimension_;
  std::uint64_t seed_;
};

}  // namespace wraleak

#endif  // WRALEAK_EMBEDDING_H_
