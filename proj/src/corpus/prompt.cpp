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

#include "endeval/corpus/prompt.hpp"

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

namespace {

constexpr const char* kInstruction =
    "Please write an ending in one sentence that follows the Context and is a candidate for the "
    "answer to the Question.";

std::string render_with(std::optional<int> limit, const std::string& context,
                        const std::string& question) {
  std::string out = kInstruction;
  if (limit) out += " Write with at most " + std::to_string(*limit) + " words.";
  out += "\n\nContext: ";
  out += context;
  out += "\nQuestion: ";
  out += question;
  out += "\nEnding:";
  return out;
}

void check(const std::string& template_id, std::optional<int> limit) {
  if (template_id != kEndingTemplateId)
    throw ValidationError("unknown prompt template '" + template_id + "'");
  if (limit && *limit <= 0)
    throw ValidationError("length limit must be positive, got " + std::to_string(*limit));
}

}  // namespace

PromptSpec PromptSpec::for_instance(const StoryInstance& s, std::optional<int> length_limit) {
  PromptSpec p;
  p.length_limit = length_limit;
  p.question = s.question;
  p.context = s.context;
  return p;
}

std::string render_prompt(const PromptSpec& spec) {
  check(spec.template_id, spec.length_limit);
  return render_with(spec.length_limit,
                     text::join(std::vector<std::string>(spec.context.begin(), spec.context.end()), " "),
                     spec.question);
}

std::string prompt_version(const std::string& template_id, std::optional<int> length_limit) {
  check(template_id, length_limit);
  auto skeleton = render_with(length_limit, "<context>", "<question>");
  return template_id + "/" + length_condition_tag(length_limit) + "@" +
         sha256_hex(skeleton).substr(0, 12);
}

std::string length_condition_tag(std::optional<int> length_limit) {
  return length_limit ? std::to_string(*length_limit) : "none";
}

std::optional<int> parse_length_condition(const std::string& tag) {
  if (tag == "none" || tag == "w/o" || tag.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    int v = std::stoi(tag, &used);
    if (used != tag.size() || v <= 0) throw std::invalid_argument(tag);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("length condition must be 'none' or a positive integer, got '" + tag + "'");
  }
}

}  // namespace endeval
