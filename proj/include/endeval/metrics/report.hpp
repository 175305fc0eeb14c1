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
#include <string>
#include <vector>

#include "endeval/human_eval/agreement.hpp"
#include "endeval/metrics/eval_run.hpp"

namespace endeval {

// Fixed-point with round-half-away-from-zero at `decimals` places.
std::string format_fixed(double value, int decimals);

// Markdown report: one (model, IFSM, Dissimilarity) table per length
// condition, a model x length-condition table of mean raw-output words, and
// a provenance table citing config hash, split seed, prompt and scorer
// versions for every run.
std::string render_markdown_report(const std::vector<EvalRun>& runs);

// model,length_condition,ifsm,dissimilarity,scorer_id,split_seed,prompt_version,config_hash
std::string render_ifsm_csv(const std::vector<EvalRun>& runs);
// model,<condition>,<condition>,... with mean words per cell
std::string render_length_csv(const std::vector<EvalRun>& runs);

// Every *.evalrun.jsonl under `dir`, sorted by path.
std::vector<EvalRun> load_runs(const std::filesystem::path& dir);

// Strata means, gap row and annotator correlations as a markdown table.
std::string render_agreement_markdown(const AgreementReport& report, const std::string& title = "MRC prediction");

}  // namespace endeval
