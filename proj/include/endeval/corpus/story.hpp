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

#include <array>
#include <string>

#include "endeval/common/jsonl.hpp"

namespace endeval {

inline constexpr std::size_t kContextSentences = 4;
inline constexpr std::size_t kEndingCount = 4;

// One multiple-choice story item: four context sentences, a question that
// singles out one ending, and four candidate endings.
struct StoryInstance {
  std::string id;
  std::array<std::string, kContextSentences> context;
  std::string question;
  std::array<std::string, kEndingCount> endings;
  int gold_label = 0;

  // Context sentences joined by single spaces. Also the grouping key for
  // splits and dissimilarity.
  std::string context_text() const;
  const std::string& gold_ending() const { return endings.at(static_cast<std::size_t>(gold_label)); }

  friend bool operator==(const StoryInstance&, const StoryInstance&) = default;
};

// Throws ValidationError describing the first violated invariant.
void validate(const StoryInstance& instance);

json to_json(const StoryInstance& instance);

// Parses the canonical record shape. `where` prefixes error messages
// (e.g. "record 12").
StoryInstance story_from_json(const json& j, const std::string& where);

}  // namespace endeval
