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

#include "endeval/scorers/evaluators.hpp"

#include <sstream>

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"
#include "endeval/metrics/substitution.hpp"
#include "endeval/scorers/training.hpp"

namespace endeval {

std::vector<FollowVerdict> FollowEvaluator::evaluate_batch(const std::vector<StoryInstance>& instances,
                                                           const std::vector<std::string>& endings) {
  if (instances.size() != endings.size()) throw ValidationError("evaluate_batch: size mismatch");
  std::vector<FollowVerdict> out;
  out.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) out.push_back(evaluate(instances[i], endings[i]));
  return out;
}

namespace {

FollowVerdict from_prediction(EvaluatorKind kind, const McPrediction& p, int gold) {
  FollowVerdict v;
  v.evaluator = kind;
  v.predicted_label = p.label;
  v.follows = p.label == gold;
  v.detail = json{{"scores", p.scores}};
  return v;
}

}  // namespace

McPrediction MrcEvaluator::predict(const StoryInstance& instance, const std::string& generated_ending) const {
  return mrc_predict(*model_, substitute_ending(instance, generated_ending).base);
}

FollowVerdict MrcEvaluator::evaluate(const StoryInstance& instance, const std::string& generated_ending) {
  return from_prediction(EvaluatorKind::kMrc, predict(instance, generated_ending), instance.gold_label);
}

std::vector<FollowVerdict> MrcEvaluator::evaluate_batch(const std::vector<StoryInstance>& instances,
                                                        const std::vector<std::string>& endings) {
  if (instances.size() != endings.size()) throw ValidationError("evaluate_batch: size mismatch");
  std::vector<McQuery> queries;
  queries.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    queries.push_back(substitute_ending(instances[i], endings[i]).base);
    validate(queries.back());
  }
  auto preds = model_->predict_batch(queries);
  std::vector<FollowVerdict> out;
  out.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i)
    out.push_back(from_prediction(EvaluatorKind::kMrc, preds[i], instances[i].gold_label));
  return out;
}

std::string to_string(StubMode m) {
  switch (m) {
    case StubMode::kAlwaysGold: return "always-gold";
    case StubMode::kNeverGold: return "never-gold";
    case StubMode::kRandom: return "random";
  }
  return "?";
}

StubMode parse_stub_mode(const std::string& s) {
  if (s == "always-gold") return StubMode::kAlwaysGold;
  if (s == "never-gold") return StubMode::kNeverGold;
  if (s == "random") return StubMode::kRandom;
  throw ConfigError("unknown stub mode '" + s + "' (expected always-gold, never-gold or random)");
}

std::string StubEvaluator::id() const {
  auto s = "stub:" + to_string(mode_);
  if (mode_ == StubMode::kRandom) s += ":" + std::to_string(seed_);
  return s + "@1";
}

McPrediction StubEvaluator::predict(const StoryInstance& instance) const {
  int label = instance.gold_label;
  if (mode_ == StubMode::kNeverGold) {
    label = (instance.gold_label + 1) % 4;
  } else if (mode_ == StubMode::kRandom) {
    auto h = sha256_hex(std::to_string(seed_) + ":" + instance.id);
    label = static_cast<int>(std::stoul(h.substr(0, 8), nullptr, 16) % 4);
  }
  std::array<double, kEndingCount> scores{};
  scores[static_cast<std::size_t>(label)] = 1.0;
  return prediction_from_scores(scores, ScoreKind::kProbabilities);
}

FollowVerdict StubEvaluator::evaluate(const StoryInstance& instance, const std::string& generated_ending) {
  substitute_ending(instance, generated_ending);  // same precondition as the real scorer
  return from_prediction(EvaluatorKind::kStub, predict(instance), instance.gold_label);
}

NspEvaluator::NspEvaluator(std::shared_ptr<NspModel> model, double threshold)
    : model_(std::move(model)), threshold_(threshold) {
  if (!model_->has_nsp_head())
    throw ConfigError("encoder '" + model_->id() + "' has no next-sentence-prediction head");
}

std::string NspEvaluator::id() const {
  std::ostringstream ss;
  ss << model_->id() << "@tau=" << threshold_;
  return ss.str();
}

FollowVerdict NspEvaluator::evaluate(const StoryInstance& instance, const std::string& generated_ending) {
  return nsp_follow(nsp_premise(instance), generated_ending, *model_, threshold_);
}

JudgeEvaluator::JudgeEvaluator(std::string judge_name, std::shared_ptr<TextBackend> backend, JudgeOptions options)
    : judge_name_(std::move(judge_name)), backend_(std::move(backend)), options_(std::move(options)) {
  judge_prompt_id(options_.prompt_version);  // validates the version
}

std::string JudgeEvaluator::id() const { return "judge:" + judge_name_ + ":" + judge_prompt_id(options_.prompt_version); }

FollowVerdict JudgeEvaluator::evaluate(const StoryInstance& instance, const std::string& generated_ending) {
  return judge_follow(instance.context_text(), instance.question, generated_ending, *backend_, options_);
}

std::unique_ptr<FollowEvaluator> make_evaluator(const ScorerSpec& spec) {
  switch (spec.backend) {
    case EvaluatorKind::kStub:
      return std::make_unique<StubEvaluator>(spec.stub_mode, spec.stub_seed);
    case EvaluatorKind::kMrc:
      if (spec.checkpoint.empty()) throw ConfigError("scorer.checkpoint is required for the mrc scorer");
      return std::make_unique<MrcEvaluator>(load_mrc_checkpoint(spec.checkpoint));
    case EvaluatorKind::kNsp:
      if (spec.nsp_endpoint.empty()) throw ConfigError("scorer.nsp.endpoint is required for the nsp scorer");
      return std::make_unique<NspEvaluator>(std::make_shared<HttpNsp>(spec.nsp_endpoint), spec.nsp_threshold);
    case EvaluatorKind::kJudge: {
      if (!spec.judge_model) throw ConfigError("scorer.judge.model is required for the judge scorer");
      JudgeOptions opts;
      opts.prompt_version = spec.judge_prompt_version;
      opts.retry = spec.judge_model->retry;
      return std::make_unique<JudgeEvaluator>(spec.judge_model->name, make_backend(*spec.judge_model), opts);
    }
  }
  throw ConfigError("unhandled scorer");
}

}  // namespace endeval
