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
#include <benchmark/benchmark.h>

#include <random>

#include "wraleak/defense.h"
#include "wraleak/embedding.h"
#include "wraleak/noise_filter.h"
#include "wraleak/trait_inference.h"

namespace {

using namespace wraleak;

DomainTrace random_trace(std::size_t n, std::uint64_t seed) {
  static const char* kDomains[] = {"doubleclick.net", "news.example.com", "wikipedia.org",
                                   "cdn.example.net", "google-analytics.com", "maps.example.org"};
  std::mt19937_64 gen(seed);
  std::vector<TraceEvent> events;
  for (std::size_t i = 0; i < n; ++i) {
    events.push_back(TraceEvent{kDomains[gen() % 6], static_cast<std::int64_t>(i) * 20,
                                static_cast<std::int64_t>(gen() % 40000), std::nullopt});
  }
  return DomainTrace("bench", std::move(events));
}

void BM_FilterTrace(benchmark::State& state) {
  const auto trace = random_trace(static_cast<std::size_t>(state.range(0)), 1);
  const auto cfg = FilterConfig::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(filter_trace(trace, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterTrace)->Arg(100)->Arg(1000)->Arg(10000);

void BM_InterleaveDecoys(benchmark::State& state) {
  const auto original = random_trace(200, 2);
  std::vector<DomainTrace> decoys;
  for (int i = 0; i < state.range(0); ++i) decoys.push_back(random_trace(200, 10 + i));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(merge_traces(original, decoys, MergeMode::kInterleave, seed++));
  }
}
BENCHMARK(BM_InterleaveDecoys)->Arg(1)->Arg(3)->Arg(5);

void BM_HashEmbedding(benchmark::State& state) {
  HashEmbeddingProvider e;
  const std::string text = "Find a highly rated vegan bakery near the waterfront that opens early";
  for (auto _ : state) benchmark::DoNotOptimize(e.embed(text));
}
BENCHMARK(BM_HashEmbedding);

void BM_ParseTraitOutput(benchmark::State& state) {
  const std::string text =
      "- Age: 41\n- Sex: Female\n- Income: $85,000\n- Education: Master's degree\n"
      "- Big Five Scores: Openness: High, Conscientiousness: Average, Extraversion: Low, "
      "Agreeableness: High, Neuroticism: Low\n- Lifestyle: Active, outdoorsy\n";
  for (auto _ : state) benchmark::DoNotOptimize(parse_trait_output(text));
}
BENCHMARK(BM_ParseTraitOutput);

}  // namespace

BENCHMARK_MAIN();
