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
#include <optional>
#include <string>

#include "endeval/corpus/story.hpp"

namespace endeval {

inline constexpr const char* kEndingTemplateId = "story-ending-v1";

struct PromptSpec {
  std::string template_id = kEndingTemplateId;
  std::optional<int> length_limit;  // words; absent = no length sentence
  std::string question;
  std::array<std::string, kContextSentences> context;

  static PromptSpec for_instance(const StoryInstance& s, std::optional<int> length_limit);
};

// Pure function of the spec. Throws ValidationError on a non-positive
// length limit or an unknown template id.
std::string render_prompt(const PromptSpec& spec);

// Identifies the template text (with the length condition) independent of
// any instance; part of every stage hash downstream of generation.
std::string prompt_version(const std::string& template_id, std::optional<int> length_limit);

// "none", "10", "15", ...
std::string length_condition_tag(std::optional<int> length_limit);
std::optional<int> parse_length_condition(const std::string& tag);

}  // namespace endeval
