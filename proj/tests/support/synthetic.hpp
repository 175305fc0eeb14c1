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
#include <string>
#include <vector>

#include "endeval/common/rng.hpp"
#include "endeval/corpus/story.hpp"

namespace endeval::testing {

// Story items in the shape of the real corpus: several questions share one
// context and its four endings, each question picking a different ending.
// Every ending carries cue words for one of four themes and each question
// names its theme, so a reader can learn the task from the text alone.
// `n` instances exactly; contexts hold 1-4 questions.
std::vector<StoryInstance> synthetic_corpus(std::size_t n, std::uint64_t seed);

// Unstructured random instance for property tests.
StoryInstance random_instance(DeterministicRng& rng, const std::string& id);
std::string random_sentence(DeterministicRng& rng, std::size_t min_words, std::size_t max_words);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace endeval::testing
