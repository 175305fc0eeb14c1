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

#include <optional>
#include <string>

#include "endeval/generation/backend.hpp"
#include "endeval/generation/generator.hpp"
#include "endeval/scorers/verdict.hpp"

namespace endeval {

inline constexpr const char* kJudgePromptVersion = "judge-v1";

// The versioned judging prompt. Throws ConfigError for an unknown version.
std::string render_judge_prompt(const std::string& context, const std::string& instruction,
                                const std::string& ending, const std::string& version = kJudgePromptVersion);
// version@digest of the template, cited in run manifests.
std::string judge_prompt_id(const std::string& version = kJudgePromptVersion);

// Case-insensitive scan for the first "not follow(s)" or "follow(s)" token
// sequence; nullopt when neither occurs.
std::optional<bool> parse_judge_reply(const std::string& reply);

struct JudgeOptions {
  std::string prompt_version = kJudgePromptVersion;
  RetryPolicy retry;
  Sleeper sleeper;
};

// One backend call (with transport retries); an unparseable reply is asked
// again once, then recorded as an abstention.
FollowVerdict judge_follow(const std::string& context, const std::string& instruction, const std::string& ending,
                           TextBackend& judge, const JudgeOptions& options = {});

}  // namespace endeval
