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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "endeval/common/jsonl.hpp"
#include "endeval/scorers/verdict.hpp"

namespace endeval {

struct VerdictRow {
  std::string instance_id;
  std::optional<int> predicted_label;
  int gold_label = 0;
  bool follows = false;
  bool abstained = false;
  std::string ending;  // the text that was scored

  friend bool operator==(const VerdictRow&, const VerdictRow&) = default;
};

// A scored evaluation set for one generator under one length condition.
struct EvalRun {
  std::string generator_name;
  std::string scorer_id;
  EvaluatorKind scorer_kind = EvaluatorKind::kStub;
  std::string length_condition = "none";
  std::vector<VerdictRow> verdicts;

  double ifsm = 0;
  std::optional<double> dissimilarity;
  std::optional<double> dissimilarity_pooled;
  std::size_t dissimilarity_contexts = 0;
  std::size_t dissimilarity_singletons = 0;
  std::string embedder_id;
  double length_mean_words = 0;

  std::string manifest_hash;
  std::uint64_t split_seed = 0;
  std::string prompt_version;
  std::string config_hash;
  std::string created_at;

  // Abstentions are excluded from the follow rate.
  std::size_t scored_count() const;
  std::size_t abstain_count() const;
};

// Mean of `follows` over non-abstained verdicts; for MRC-style scorers this
// equals compute_ifsm over (predicted, gold). DomainError if nothing scored.
double follow_rate(const std::vector<VerdictRow>& verdicts);

// Follow and not-follow instance ids, abstentions dropped, run order kept.
std::pair<std::vector<std::string>, std::vector<std::string>> stratify_follow(const EvalRun& run);

// One header line ({"type":"eval_run",...}) then one {"type":"verdict",...}
// line per instance.
void save_eval_run(const std::filesystem::path& path, const EvalRun& run);
EvalRun load_eval_run(const std::filesystem::path& path);

}  // namespace endeval
