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
#include <vector>

#include "endeval/common/jsonl.hpp"
#include "endeval/human_eval/ratings.hpp"
#include "endeval/human_eval/tasks.hpp"

namespace endeval {

// Perspective order used by every array below.
inline constexpr std::array<const char*, 3> kPerspectives{"Fluency", "Coherence", "Instruction-following"};

// Sample Pearson correlation. DomainError when the lengths differ or fewer
// than two pairs are given; nullopt when either side has zero variance.
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

struct AgreementOptions {
  // Annotators to include; empty = every annotator present in the ratings.
  std::vector<std::string> annotators;
  // When false, a task lacking a rating from any included annotator is a
  // ValidationError. When true, each task's mean uses whoever rated it and
  // correlations use tasks both annotators rated.
  bool partial = false;
};

struct AgreementReport {
  std::vector<std::string> annotators;
  std::size_t follow_tasks = 0;
  std::size_t not_follow_tasks = 0;
  bool partial = false;
  // Per perspective: mean over tasks of the per-task annotator mean.
  std::array<std::optional<double>, 3> follow_means;
  std::array<std::optional<double>, 3> not_follow_means;
  // follow - not_follow
  std::array<std::optional<double>, 3> delta;
  // Two annotators: their r over all rated tasks. More: mean pairwise r over
  // the pairs where r is defined. nullopt when undefined.
  std::array<std::optional<double>, 3> pearson;
};

json to_json(const AgreementReport& report);

// Pure function of its inputs. Ratings for tasks absent from `tasks` or from
// annotators outside the selection are ignored.
AgreementReport build_agreement_report(const std::vector<Rating>& ratings, const std::vector<AnnotationTask>& tasks,
                                       const AgreementOptions& options = {});

}  // namespace endeval
