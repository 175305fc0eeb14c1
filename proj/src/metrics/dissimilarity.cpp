// Copyright 2026 The endeval Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "endeval/metrics/dissimilarity.hpp"

#include <unordered_map>

#include "endeval/common/error.hpp"

namespace endeval {

DissimilarityResult compute_dissimilarity(const EndingsByContext& groups, Embedder& embedder) {
  // Embed each distinct text once so identical endings share one vector.
  std::vector<std::string> texts;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& [context, endings] : groups) {
    if (endings.empty()) throw ValidationError("context group without endings: " + context);
    for (const auto& [question, ending] : endings)
      if (slot.emplace(ending, texts.size()).second) texts.push_back(ending);
  }
  DissimilarityResult r;
  for (const auto& [_, endings] : groups) {
    if (endings.size() < 2) ++r.contexts_singleton;
  }
  if (r.contexts_singleton == groups.size())
    throw DomainError("dissimilarity needs at least one context with two or more endings");

  auto vectors = embedder.embed(texts);
  if (vectors.size() != texts.size()) throw BackendError("embedder returned the wrong number of vectors", false);

  double sum_of_means = 0;
  double pooled = 0;
  for (const auto& [_, endings] : groups) {
    const std::size_t k = endings.size();
    if (k < 2) continue;
    double group_sum = 0;
    std::size_t group_pairs = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& a = vectors[slot.at(endings[i].second)];
      for (std::size_t j = i + 1; j < k; ++j) {
        const auto& b = vectors[slot.at(endings[j].second)];
        const double d = 1.0 - cosine_similarity(a, b);
        group_sum += d;
        ++group_pairs;
        if (r.pairs == 0 && group_pairs == 1) r.max_pair = d;
        r.max_pair = std::max(r.max_pair, d);
        if (d > 1.0) r.any_pair_above_one = true;
      }
    }
    sum_of_means += group_sum / static_cast<double>(group_pairs);
    pooled += group_sum;
    r.pairs += group_pairs;
    ++r.contexts_scored;
  }
  r.mean_of_context_means = sum_of_means / static_cast<double>(r.contexts_scored);
  r.pooled_pair_mean = pooled / static_cast<double>(r.pairs);
  return r;
}

}  // namespace endeval
