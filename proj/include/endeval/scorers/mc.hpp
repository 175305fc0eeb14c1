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
#include <span>
#include <string>
#include <vector>

#include "endeval/common/jsonl.hpp"
#include "endeval/corpus/story.hpp"

namespace endeval {

// A four-way multiple-choice reading-comprehension query.
struct McQuery {
  std::array<std::string, kContextSentences> context;
  std::string question;
  std::array<std::string, kEndingCount> options;

  static McQuery from_instance(const StoryInstance& s);
  friend bool operator==(const McQuery&, const McQuery&) = default;
};

void validate(const McQuery& q);
json to_json(const McQuery& q);

enum class ScoreKind { kLogits, kProbabilities };

struct McPrediction {
  int label = 0;
  std::array<double, kEndingCount> scores{};
  ScoreKind kind = ScoreKind::kLogits;

  friend bool operator==(const McPrediction&, const McPrediction&) = default;
};

// Lowest index attaining the maximum score.
int argmax_lowest(std::span<const double> scores);
McPrediction prediction_from_scores(const std::array<double, kEndingCount>& scores,
                                    ScoreKind kind = ScoreKind::kLogits);

// Token budget packing for one (context, question, option) encoder input.
// When the three do not fit, context tokens are dropped from the left;
// question and option are never cut.
struct PackedInput {
  std::vector<std::string> context;
  std::vector<std::string> question;
  std::vector<std::string> option;
  std::size_t dropped_context_tokens = 0;
};

PackedInput pack_mc_input(const McQuery& q, std::size_t option, std::size_t budget);

// Every MRC backend maps a query to per-option scores. Implementations are
// deterministic and read-only after load.
class MrcModel {
 public:
  virtual ~MrcModel() = default;
  virtual McPrediction predict(const McQuery& query) const = 0;
  // Backends that amortize per-call cost override this.
  virtual std::vector<McPrediction> predict_batch(std::span<const McQuery> queries) const;
  // Backend name plus checkpoint digest.
  virtual std::string id() const = 0;
};

inline McPrediction mrc_predict(const MrcModel& model, const McQuery& query) {
  validate(query);
  return model.predict(query);
}

}  // namespace endeval
