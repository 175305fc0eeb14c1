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

#include "endeval/scorers/mc.hpp"

#include "endeval/common/error.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

McQuery McQuery::from_instance(const StoryInstance& s) {
  return McQuery{s.context, s.question, s.endings};
}

void validate(const McQuery& q) {
  for (std::size_t i = 0; i < q.options.size(); ++i)
    if (text::is_blank(q.options[i]))
      throw ValidationError("query option " + std::to_string(i) + " is empty");
}

json to_json(const McQuery& q) {
  return json{{"context", q.context}, {"question", q.question}, {"options", q.options}};
}

int argmax_lowest(std::span<const double> scores) {
  if (scores.empty()) throw DomainError("argmax of empty score list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return static_cast<int>(best);
}

McPrediction prediction_from_scores(const std::array<double, kEndingCount>& scores, ScoreKind kind) {
  return McPrediction{argmax_lowest(scores), scores, kind};
}

PackedInput pack_mc_input(const McQuery& q, std::size_t option, std::size_t budget) {
  PackedInput p;
  for (const auto& sentence : q.context)
    for (auto& t : text::word_tokens(sentence)) p.context.push_back(std::move(t));
  p.question = text::word_tokens(q.question);
  p.option = text::word_tokens(q.options.at(option));
  const std::size_t fixed = p.question.size() + p.option.size();
  const std::size_t room = budget > fixed ? budget - fixed : 0;
  if (p.context.size() > room) {
    p.dropped_context_tokens = p.context.size() - room;
    p.context.erase(p.context.begin(), p.context.begin() + static_cast<std::ptrdiff_t>(p.dropped_context_tokens));
  }
  return p;
}

std::vector<McPrediction> MrcModel::predict_batch(std::span<const McQuery> queries) const {
  std::vector<McPrediction> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(predict(q));
  return out;
}

}  // namespace endeval
