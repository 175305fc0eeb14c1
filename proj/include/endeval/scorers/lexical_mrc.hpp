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
#include <vector>

#include "endeval/scorers/mc.hpp"

namespace endeval {

struct LexicalMrcConfig {
  int epochs = 8;
  double learning_rate = 0.2;
  std::uint64_t seed = 0;
  int hash_bits = 18;
  std::size_t token_budget = 512;
};

json to_json(const LexicalMrcConfig& c);
LexicalMrcConfig lexical_config_from_json(const json& j);

// Desk-scale multiple-choice reader: a linear scorer over hashed
// question/option/context features with a softmax over the four options,
// trained by AdaGrad on cross-entropy. It stands in for a fine-tuned encoder
// where no GPU or pretrained weights are available, and keeps the same
// packing and tie-break rules.
class LexicalMrc final : public MrcModel {
 public:
  explicit LexicalMrc(LexicalMrcConfig config = {});

  McPrediction predict(const McQuery& query) const override;
  std::string id() const override;

  struct EpochStats {
    int epoch;
    double train_loss;
    double valid_accuracy;
  };
  // Keeps the weights of the epoch with the best validation accuracy
  // (earliest on ties). With an empty validation set the last epoch wins.
  std::vector<EpochStats> fit(const std::vector<McQuery>& train, const std::vector<int>& train_labels,
                              const std::vector<McQuery>& valid, const std::vector<int>& valid_labels);

  void save(const std::filesystem::path& dir) const;
  static LexicalMrc load(const std::filesystem::path& dir);

  const LexicalMrcConfig& config() const { return config_; }

 private:
  using Feature = std::pair<std::uint32_t, float>;
  std::vector<Feature> features(const McQuery& q, std::size_t option) const;
  double score(const std::vector<Feature>& f) const;
  void refresh_id();

  LexicalMrcConfig config_;
  std::vector<float> weights_;
  std::string id_;
};

}  // namespace endeval
