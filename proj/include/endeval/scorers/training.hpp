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
#include <memory>
#include <string>
#include <vector>

#include "endeval/corpus/splits.hpp"
#include "endeval/corpus/story.hpp"
#include "endeval/scorers/external_mrc.hpp"
#include "endeval/scorers/lexical_mrc.hpp"

namespace endeval {

struct TrainingConfig {
  std::string backend = "lexical";  // "lexical" | "external"
  LexicalMrcConfig lexical;
  ExternalMrcConfig external;
};

json to_json(const TrainingConfig& c);
TrainingConfig training_config_from_json(const json& j);

struct TrainingMetrics {
  double valid_accuracy = 0;
  double test_accuracy = 0;
  std::size_t n_train = 0;
  std::size_t n_valid = 0;
  std::size_t n_test = 0;
  json extra = json::object();
};

json to_json(const TrainingMetrics& m);

struct TrainedModel {
  std::shared_ptr<MrcModel> model;
  TrainingMetrics metrics;
};

// Throws LeakageError if any instance id is in manifest.gen_eval.
void check_no_leakage(const std::vector<StoryInstance>& instances, const SplitManifest& manifest,
                      const std::string& role);

// Trains on `train`, selects on `valid`, reports held-out accuracy on
// `test`. The checkpoint directory receives the backend's weights plus
// training_config.json, split_manifest.sha256 and metrics.json.
TrainedModel train_mrc(const std::vector<StoryInstance>& train, const std::vector<StoryInstance>& valid,
                       const std::vector<StoryInstance>& test, const SplitManifest& manifest,
                       const TrainingConfig& config, const std::filesystem::path& checkpoint_dir);

// Reads model.json to pick the backend.
std::shared_ptr<MrcModel> load_mrc_checkpoint(const std::filesystem::path& dir);

// Plain multiple-choice accuracy over unmodified instances.
double mrc_accuracy(const MrcModel& model, const std::vector<StoryInstance>& instances);

}  // namespace endeval
