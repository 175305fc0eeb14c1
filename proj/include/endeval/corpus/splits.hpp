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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "endeval/corpus/story.hpp"

namespace endeval {

// Target sizes for the four disjoint lists. The first three feed MRC
// training; gen_eval is held out for generation evaluation.
struct SplitSizes {
  std::size_t mrc_train = 1690;
  std::size_t mrc_valid = 240;
  std::size_t mrc_test = 338;
  std::size_t gen_eval = 333;

  std::size_t total() const { return mrc_train + mrc_valid + mrc_test + gen_eval; }
  friend bool operator==(const SplitSizes&, const SplitSizes&) = default;

  // Published sizes when n matches their total (2601); otherwise the same
  // proportions scaled to n with largest-remainder rounding.
  static SplitSizes proportional(std::size_t n);
};

struct SplitManifest {
  std::vector<std::string> mrc_train;
  std::vector<std::string> mrc_valid;
  std::vector<std::string> mrc_test;
  std::vector<std::string> gen_eval;
  std::uint64_t seed = 0;

  friend bool operator==(const SplitManifest&, const SplitManifest&) = default;
};

// Deterministic for fixed (instances, seed, sizes). Instances sharing a
// context are assigned as one group, so no context spans the MRC and
// generation-evaluation halves. When group sizes make an exact target
// unreachable the closest reachable size is used; the final list
// (mrc_train) takes every remaining group.
SplitManifest make_splits(const std::vector<StoryInstance>& instances, std::uint64_t seed,
                          const std::optional<SplitSizes>& sizes = std::nullopt);

json to_json(const SplitManifest& m);
SplitManifest manifest_from_json(const json& j);
void save_manifest(const std::filesystem::path& path, const SplitManifest& m);
SplitManifest load_manifest(const std::filesystem::path& path);
std::string manifest_hash(const SplitManifest& m);

// Subset of `instances` whose ids appear in `ids`, in `ids` order. Throws
// NotFoundError for an id absent from `instances`.
std::vector<StoryInstance> select(const std::vector<StoryInstance>& instances,
                                  const std::vector<std::string>& ids);

}  // namespace endeval
