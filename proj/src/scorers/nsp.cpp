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

#include "endeval/scorers/nsp.hpp"

#include "endeval/common/error.hpp"
#include "endeval/common/http.hpp"

namespace endeval {

std::string to_string(EvaluatorKind k) {
  switch (k) {
    case EvaluatorKind::kMrc: return "mrc";
    case EvaluatorKind::kNsp: return "nsp";
    case EvaluatorKind::kJudge: return "judge";
    case EvaluatorKind::kStub: return "stub";
  }
  return "?";
}

EvaluatorKind parse_evaluator_kind(const std::string& s) {
  if (s == "mrc") return EvaluatorKind::kMrc;
  if (s == "nsp") return EvaluatorKind::kNsp;
  if (s == "judge") return EvaluatorKind::kJudge;
  if (s == "stub") return EvaluatorKind::kStub;
  throw ConfigError("unknown scorer '" + s + "' (expected mrc, nsp, judge or stub)");
}

double HttpNsp::is_next_probability(const std::string& premise, const std::string& ending) {
  auto res = http::post_json(url_, json{{"premise", premise}, {"ending", ending}}.dump(), {});
  if (res.status != 200)
    throw BackendError("NSP endpoint returned HTTP " + std::to_string(res.status), http::is_retryable_status(res.status));
  try {
    return json::parse(res.body).at("probability").get<double>();
  } catch (const json::exception& e) {
    throw BackendError(std::string("NSP endpoint: unexpected response: ") + e.what());
  }
}

std::string nsp_premise(const StoryInstance& s) { return s.context_text() + " " + s.question; }

FollowVerdict nsp_follow(const std::string& context_plus_question, const std::string& ending, NspModel& model,
                         double threshold) {
  if (!model.has_nsp_head())
    throw ConfigError("encoder '" + model.id() + "' has no next-sentence-prediction head");
  const double p = model.is_next_probability(context_plus_question, ending);
  FollowVerdict v;
  v.evaluator = EvaluatorKind::kNsp;
  v.follows = p >= threshold;
  v.detail = json{{"probability", p}, {"threshold", threshold}};
  return v;
}

}  // namespace endeval
