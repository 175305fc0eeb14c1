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

#include "endeval/corpus/story.hpp"
#include "endeval/scorers/mc.hpp"

namespace endeval {

// Bridge to a transformer multiple-choice model run by an external program
// (tools/mrc/hf_multiple_choice.py by default). The program speaks two verbs
// over files:
//
//   <command> train --train T --valid V --test E --out DIR --config C
//     T/V/E: lines of {"context":[4], "question", "options":[4], "label"}
//     C: JSON hyperparameters (base_model, epochs, ...), passed through
//     writes DIR/metrics.json with at least valid_accuracy, test_accuracy
//   <command> predict --checkpoint DIR --in Q --out S
//     Q: lines of {"context", "question", "options"}
//     S: one {"scores":[4]} line per query, same order
struct ExternalMrcConfig {
  std::string command = "python3 " ENDEVAL_DATA_DIR "/../tools/mrc/hf_multiple_choice.py";
  json hyperparameters = json{{"base_model", "microsoft/deberta-v3-base"}};
  std::size_t batch_size = 256;  // queries per predict invocation
};

json to_json(const ExternalMrcConfig& c);
ExternalMrcConfig external_config_from_json(const json& j);

class ExternalMrc final : public MrcModel {
 public:
  ExternalMrc(std::filesystem::path checkpoint, ExternalMrcConfig config);

  McPrediction predict(const McQuery& query) const override;
  std::vector<McPrediction> predict_batch(std::span<const McQuery> queries) const override;
  std::string id() const override { return id_; }

  // Runs the train verb; returns the parsed metrics.json.
  static json train(const ExternalMrcConfig& config, const std::vector<StoryInstance>& train,
                    const std::vector<StoryInstance>& valid, const std::vector<StoryInstance>& test,
                    const std::filesystem::path& out_dir);

 private:
  std::filesystem::path checkpoint_;
  ExternalMrcConfig config_;
  std::string id_;
};

// Runs `command` through the shell; throws BackendError on non-zero exit.
void run_command(const std::string& command);
std::string shell_quote(const std::string& s);

}  // namespace endeval
