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

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "endeval/metrics/embedder.hpp"

namespace endeval {

// context text -> (question, ending) for every ending generated from it.
using EndingsByContext = std::map<std::string, std::vector<std::pair<std::string, std::string>>>;

struct DissimilarityResult {
  // Mean over contexts of the mean pairwise (1 - cosine) within the context.
  double mean_of_context_means = 0;
  // Mean over all within-context pairs pooled together.
  double pooled_pair_mean = 0;
  std::size_t contexts_scored = 0;    // contexts with >= 2 endings
  std::size_t contexts_singleton = 0;  // excluded from the means
  std::size_t pairs = 0;
  double max_pair = 0;
  // True when some pair has negative cosine (1 - cos > 1); values are not clamped.
  bool any_pair_above_one = false;
};

// Throws DomainError if no context has at least two endings, and
// ValidationError for empty groups.
DissimilarityResult compute_dissimilarity(const EndingsByContext& endings_by_context, Embedder& embedder);

}  // namespace endeval
