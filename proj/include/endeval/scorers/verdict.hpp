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

#include "endeval/common/jsonl.hpp"

namespace endeval {

enum class EvaluatorKind { kMrc, kNsp, kJudge, kStub };

std::string to_string(EvaluatorKind k);
EvaluatorKind parse_evaluator_kind(const std::string& s);

struct FollowVerdict {
  EvaluatorKind evaluator = EvaluatorKind::kStub;
  bool follows = false;
  // Judge only: no parseable verdict; excluded from follow-rate aggregation.
  bool abstained = false;
  // MRC and stub: the selected option.
  std::optional<int> predicted_label;
  json detail = json::object();
};

}  // namespace endeval
