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

#include <functional>
#include <string>

#include "endeval/corpus/story.hpp"
#include "endeval/scorers/verdict.hpp"

namespace endeval {

// An encoder that can score whether `ending` continues `premise`.
class NspModel {
 public:
  virtual ~NspModel() = default;
  virtual bool has_nsp_head() const = 0;
  virtual double is_next_probability(const std::string& premise, const std::string& ending) = 0;
  virtual std::string id() const = 0;
};

// Answers from a caller-supplied function; for tests and report fixtures.
class ScriptedNsp final : public NspModel {
 public:
  using Fn = std::function<double(const std::string&, const std::string&)>;
  explicit ScriptedNsp(Fn fn, bool has_head = true) : fn_(std::move(fn)), has_head_(has_head) {}
  bool has_nsp_head() const override { return has_head_; }
  double is_next_probability(const std::string& p, const std::string& e) override { return fn_(p, e); }
  std::string id() const override { return "nsp-scripted"; }

 private:
  Fn fn_;
  bool has_head_;
};

// POSTs {"premise", "ending"} to `url` and reads {"probability"}.
class HttpNsp final : public NspModel {
 public:
  explicit HttpNsp(std::string url) : url_(std::move(url)) {}
  bool has_nsp_head() const override { return true; }
  double is_next_probability(const std::string& premise, const std::string& ending) override;
  std::string id() const override { return "nsp-http:" + url_; }

 private:
  std::string url_;
};

// Context sentences followed by the question.
std::string nsp_premise(const StoryInstance& s);

// follows = probability >= threshold (inclusive). Throws ConfigError when the
// model has no NSP head.
FollowVerdict nsp_follow(const std::string& context_plus_question, const std::string& ending, NspModel& model,
                         double threshold = 0.5);

}  // namespace endeval
