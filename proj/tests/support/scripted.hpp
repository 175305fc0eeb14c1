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

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "endeval/common/error.hpp"
#include "endeval/generation/backend.hpp"

namespace endeval::testing {

// Backend whose replies come from a function of (request, call number for
// this instance). Thread-safe.
class ScriptedBackend final : public TextBackend {
 public:
  using Fn = std::function<std::string(const GenerationRequest&, int call)>;
  explicit ScriptedBackend(Fn fn) : fn_(std::move(fn)) {}

  std::string complete(const GenerationRequest& request) override {
    int call;
    {
      std::lock_guard lock(mu_);
      call = ++calls_per_key_[request.instance ? request.instance->id : request.prompt];
    }
    ++calls_;
    return fn_(request, call);
  }
  std::size_t calls() const { return calls_.load(); }

 private:
  Fn fn_;
  std::mutex mu_;
  std::map<std::string, int> calls_per_key_;
  std::atomic<std::size_t> calls_{0};
};

// Throws a retryable error for the first `failures` calls per instance, then
// returns the gold ending.
inline ScriptedBackend::Fn flaky_gold(int failures) {
  return [failures](const GenerationRequest& r, int call) -> std::string {
    if (call <= failures) throw BackendError("transient failure " + std::to_string(call));
    return r.instance->gold_ending();
  };
}

}  // namespace endeval::testing
