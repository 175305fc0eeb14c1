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
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "endeval/corpus/prompt.hpp"
#include "endeval/generation/backend.hpp"
#include "endeval/generation/cache.hpp"
#include "endeval/generation/record.hpp"

namespace endeval {

enum class FailurePolicy { kFailFast, kCollect };

struct LedgerEntry {
  std::size_t index;
  std::string instance_id;
  std::string message;
};

struct BatchResult {
  std::vector<GenerationRecord> records;  // input order, failures omitted
  std::vector<LedgerEntry> errors;        // sorted by index
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

Sleeper real_sleeper();

struct Completion {
  std::string text;
  int attempts = 1;
};

// Calls the backend until it succeeds, a non-retryable error occurs or
// policy.max_attempts is reached, sleeping with exponential backoff between
// attempts. `calls` (optional) counts every backend invocation.
Completion complete_with_retry(TextBackend& backend, const GenerationRequest& request,
                               const RetryPolicy& policy, const Sleeper& sleeper,
                               RateLimiter* limiter = nullptr,
                               std::atomic<std::size_t>* calls = nullptr);

// Runs one generator over instances: cache lookup, rate-limited backend call
// with exponential-backoff retry, postprocessing, cache write.
class Generator {
 public:
  Generator(GeneratorSpec spec, std::shared_ptr<TextBackend> backend,
            std::shared_ptr<GenerationCache> cache = std::make_shared<GenerationCache>(),
            Sleeper sleeper = {});

  GenerationRecord generate_ending(const StoryInstance& instance, const std::string& prompt);

  // Up to spec.concurrency requests in flight. Output order always matches
  // input order. kFailFast rethrows the first failure after in-flight calls
  // drain; kCollect records it in the ledger.
  BatchResult batch_generate(const std::vector<StoryInstance>& instances,
                             std::optional<int> length_limit,
                             FailurePolicy policy = FailurePolicy::kFailFast);

  // Backend invocations so far, including failed attempts.
  std::size_t backend_calls() const { return calls_.load(); }
  const GeneratorSpec& spec() const { return spec_; }

 private:
  GeneratorSpec spec_;
  std::shared_ptr<TextBackend> backend_;
  std::shared_ptr<GenerationCache> cache_;
  Sleeper sleeper_;
  RateLimiter limiter_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace endeval
