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

#include "endeval/common/jsonl.hpp"
#include "endeval/corpus/story.hpp"
#include "endeval/metrics/eval_run.hpp"

namespace endeval {

enum class Strata { kFollow, kNotFollow };

std::string to_string(Strata s);
Strata parse_strata(const std::string& s);

// One ending to be rated. hidden_strata and generator_name stay server-side;
// annotators only ever see task_id, context, instruction and ending.
struct AnnotationTask {
  std::string task_id;
  std::string instance_id;
  std::string generator_name;
  std::string context;
  std::string instruction;
  std::string ending;
  Strata hidden_strata = Strata::kFollow;

  friend bool operator==(const AnnotationTask&, const AnnotationTask&) = default;
};

json to_json(const AnnotationTask& t);
AnnotationTask task_from_json(const json& j);
// The annotator-facing projection.
json public_view(const AnnotationTask& t);

void save_tasks(const std::filesystem::path& path, const std::vector<AnnotationTask>& tasks);
std::vector<AnnotationTask> load_tasks(const std::filesystem::path& path);

struct SamplingOptions {
  std::size_t n_follow = 25;
  std::size_t n_not_follow = 20;
  std::uint64_t seed = 0;
  std::vector<std::string> models;  // generator names to draw from; empty = all runs
};

// Draws without replacement from the Follow and Not Follow strata pooled
// over the selected runs, then shuffles the combined list so order reveals
// nothing. Deterministic for a fixed seed. Throws SamplingError naming the
// shortfall when a stratum is too small, NotFoundError when a verdict's
// instance is missing from `instances`.
std::vector<AnnotationTask> sample_tasks(const std::vector<EvalRun>& runs,
                                         const std::vector<StoryInstance>& instances,
                                         const SamplingOptions& options = {});

}  // namespace endeval
