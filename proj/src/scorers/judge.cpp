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

#include "endeval/scorers/judge.hpp"

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

namespace {

std::string v1(const std::string& context, const std::string& instruction, const std::string& ending) {
  return "You are checking whether a story ending follows an instruction.\n\n"
         "Context: " + context + "\n"
         "Instruction: " + instruction + "\n"
         "Ending: " + ending + "\n\n"
         "Given the context, is the ending a good answer to the instruction? "
         "Reply with exactly one of: Follow, Not Follow.\n"
         "Verdict:";
}

}  // namespace

std::string render_judge_prompt(const std::string& context, const std::string& instruction,
                                const std::string& ending, const std::string& version) {
  if (version != kJudgePromptVersion) throw ConfigError("unknown judge prompt version '" + version + "'");
  return v1(context, instruction, ending);
}

std::string judge_prompt_id(const std::string& version) {
  return version + "@" + sha256_hex(render_judge_prompt("<context>", "<instruction>", "<ending>", version)).substr(0, 12);
}

std::optional<bool> parse_judge_reply(const std::string& reply) {
  auto tokens = text::word_tokens(reply);
  auto is_follow = [](const std::string& t) { return t == "follow" || t == "follows"; };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "not" && i + 1 < tokens.size() && is_follow(tokens[i + 1])) return false;
    if (is_follow(tokens[i])) return true;
  }
  return std::nullopt;
}

FollowVerdict judge_follow(const std::string& context, const std::string& instruction, const std::string& ending,
                           TextBackend& judge, const JudgeOptions& options) {
  const auto prompt = render_judge_prompt(context, instruction, ending, options.prompt_version);
  const Sleeper sleeper = options.sleeper ? options.sleeper : real_sleeper();
  FollowVerdict v;
  v.evaluator = EvaluatorKind::kJudge;
  json replies = json::array();
  for (int ask = 0; ask < 2; ++ask) {
    Completion c;
    try {
      c = complete_with_retry(judge, {nullptr, prompt}, options.retry, sleeper);
    } catch (const BackendError& e) {
      throw BackendError(std::string("judge: ") + e.what(), false);
    }
    replies.push_back(c.text);
    if (auto parsed = parse_judge_reply(c.text)) {
      v.follows = *parsed;
      v.detail = json{{"replies", replies}, {"prompt", judge_prompt_id(options.prompt_version)}};
      return v;
    }
  }
  v.abstained = true;
  v.detail = json{{"replies", replies}, {"prompt", judge_prompt_id(options.prompt_version)}};
  return v;
}

}  // namespace endeval
