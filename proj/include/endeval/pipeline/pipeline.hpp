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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "endeval/metrics/eval_run.hpp"
#include "endeval/pipeline/config.hpp"

namespace endeval {

inline constexpr std::array<const char*, 6> kStages{"convert", "split", "generate", "score", "metrics", "report"};

// A stage failed. Completed stages stay on disk under state_dir(), so
// rerunning the same config resumes from the failed stage.
class StageError : public Error {
 public:
  StageError(std::string stage, std::filesystem::path state_dir, const std::string& cause);
  const std::string& stage() const { return stage_; }
  const std::filesystem::path& state_dir() const { return state_dir_; }

 private:
  std::string stage_;
  std::filesystem::path state_dir_;
};

struct PipelineHooks {
  // Overrides make_backend / make_evaluator (tests, embedding in other tools).
  std::function<std::shared_ptr<TextBackend>(const GeneratorSpec&)> backend_factory;
  std::function<std::unique_ptr<FollowEvaluator>(const ScorerSpec&)> evaluator_factory;
  std::function<std::unique_ptr<Embedder>(const EmbedderSpec&)> embedder_factory;
  Sleeper sleeper;
  // Return after this stage completes.
  std::optional<std::string> stop_after;
  // Progress lines ("[generate] flan-t5-small: 333 records").
  std::function<void(const std::string&)> log;
};

struct StageStatus {
  std::string stage;
  std::string key;
  bool reused = false;
};

struct PipelineResult {
  std::vector<EvalRun> runs;  // one per generator, config order
  std::vector<StageStatus> stages;
  std::filesystem::path report_path;
  std::filesystem::path manifest_path;  // run_manifest.json
  std::size_t generation_failures = 0;
};

// convert -> split -> generate -> score (substitute + predict) -> metrics ->
// report. Each stage writes under <output_dir>/stages/<stage>-<key>/ where
// the key digests every upstream input, and finishes by writing stage.json.
// A directory with stage.json is reused instead of recomputed. EvalRuns land
// in <output_dir>/runs/ and the report joins every run found there.
PipelineResult run_pipeline(const RunConfig& config, const PipelineHooks& hooks = {});

// Substitutes each record's ending into its instance and scores it. Records
// whose instance is not in `instances` are a NotFoundError. Provenance fields
// other than scorer and length condition are left for the caller.
EvalRun score_generations(const std::vector<GenerationRecord>& records, const std::vector<StoryInstance>& instances,
                          FollowEvaluator& evaluator, const std::string& generator_name,
                          const std::string& length_condition);

// Fills IFSM, dissimilarity (grouped by context) and mean raw-output length.
void attach_metrics(EvalRun& run, const std::vector<GenerationRecord>& records,
                    const std::vector<StoryInstance>& instances, Embedder& embedder);

// "<generator>__<length condition>.evalrun.jsonl"
std::string eval_run_filename(const std::string& generator_name, const std::string& length_condition);

}  // namespace endeval
