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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "endeval/corpus/story.hpp"
#include "endeval/generation/backend.hpp"
#include "endeval/scorers/judge.hpp"
#include "endeval/scorers/mc.hpp"
#include "endeval/scorers/nsp.hpp"
#include "endeval/scorers/verdict.hpp"

namespace endeval {

// Common interface of the follow evaluators: does `generated_ending`, placed
// in `instance`, follow the instance's question?
class FollowEvaluator {
 public:
  virtual ~FollowEvaluator() = default;
  virtual EvaluatorKind kind() const = 0;
  // Stable identifier with version; recorded in every EvalRun.
  virtual std::string id() const = 0;
  virtual FollowVerdict evaluate(const StoryInstance& instance, const std::string& generated_ending) = 0;
  virtual std::vector<FollowVerdict> evaluate_batch(const std::vector<StoryInstance>& instances,
                                                    const std::vector<std::string>& endings);
};

// Substitutes the ending at the gold position and asks the MRC model.
class MrcEvaluator final : public FollowEvaluator {
 public:
  explicit MrcEvaluator(std::shared_ptr<const MrcModel> model) : model_(std::move(model)) {}
  EvaluatorKind kind() const override { return EvaluatorKind::kMrc; }
  std::string id() const override { return model_->id(); }
  FollowVerdict evaluate(const StoryInstance& instance, const std::string& generated_ending) override;
  std::vector<FollowVerdict> evaluate_batch(const std::vector<StoryInstance>& instances,
                                            const std::vector<std::string>& endings) override;
  McPrediction predict(const StoryInstance& instance, const std::string& generated_ending) const;

 private:
  std::shared_ptr<const MrcModel> model_;
};

enum class StubMode { kAlwaysGold, kNeverGold, kRandom };

std::string to_string(StubMode m);
StubMode parse_stub_mode(const std::string& s);

// Deterministic oracle for tests: picks the gold option, (gold + 1) mod 4,
// or a label drawn from (seed, instance id).
class StubEvaluator final : public FollowEvaluator {
 public:
  explicit StubEvaluator(StubMode mode, std::uint64_t seed = 0) : mode_(mode), seed_(seed) {}
  EvaluatorKind kind() const override { return EvaluatorKind::kStub; }
  std::string id() const override;
  FollowVerdict evaluate(const StoryInstance& instance, const std::string& generated_ending) override;
  McPrediction predict(const StoryInstance& instance) const;

 private:
  StubMode mode_;
  std::uint64_t seed_;
};

class NspEvaluator final : public FollowEvaluator {
 public:
  NspEvaluator(std::shared_ptr<NspModel> model, double threshold = 0.5);
  EvaluatorKind kind() const override { return EvaluatorKind::kNsp; }
  std::string id() const override;
  FollowVerdict evaluate(const StoryInstance& instance, const std::string& generated_ending) override;

 private:
  std::shared_ptr<NspModel> model_;
  double threshold_;
};

class JudgeEvaluator final : public FollowEvaluator {
 public:
  JudgeEvaluator(std::string judge_name, std::shared_ptr<TextBackend> backend, JudgeOptions options = {});
  EvaluatorKind kind() const override { return EvaluatorKind::kJudge; }
  std::string id() const override;
  FollowVerdict evaluate(const StoryInstance& instance, const std::string& generated_ending) override;

 private:
  std::string judge_name_;
  std::shared_ptr<TextBackend> backend_;
  JudgeOptions options_;
};

// Declarative scorer selection (config keys scorer.*).
struct ScorerSpec {
  EvaluatorKind backend = EvaluatorKind::kStub;
  std::string checkpoint;         // mrc
  StubMode stub_mode = StubMode::kAlwaysGold;
  std::uint64_t stub_seed = 0;
  double nsp_threshold = 0.5;
  std::string nsp_endpoint;       // nsp
  std::optional<GeneratorSpec> judge_model;  // judge
  std::string judge_prompt_version = kJudgePromptVersion;
};

std::unique_ptr<FollowEvaluator> make_evaluator(const ScorerSpec& spec);

}  // namespace endeval
