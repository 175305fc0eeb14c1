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

#include "endeval/generation/generator.hpp"

#include <exception>
#include <mutex>
#include <thread>

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"
#include "endeval/generation/postprocess.hpp"

namespace endeval {

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

Completion complete_with_retry(TextBackend& backend, const GenerationRequest& request,
                               const RetryPolicy& policy, const Sleeper& sleeper,
                               RateLimiter* limiter, std::atomic<std::size_t>* calls) {
  for (int attempt = 1;; ++attempt) {
    if (attempt > 1) sleeper(policy.delay_before(attempt));
    if (limiter) limiter->acquire();
    if (calls) ++*calls;
    try {
      return {backend.complete(request), attempt};
    } catch (const BackendError& e) {
      if (!e.retryable() || attempt >= policy.max_attempts) {
        throw BackendError("failed after " + std::to_string(attempt) + " attempt(s): " + e.what(), false);
      }
    }
  }
}

Generator::Generator(GeneratorSpec spec, std::shared_ptr<TextBackend> backend,
                     std::shared_ptr<GenerationCache> cache, Sleeper sleeper)
    : spec_(std::move(spec)),
      backend_(std::move(backend)),
      cache_(std::move(cache)),
      sleeper_(sleeper ? std::move(sleeper) : real_sleeper()),
      limiter_(spec_.requests_per_second) {
  validate(spec_);
  if (!backend_) throw ConfigError("generator '" + spec_.name + "' has no backend");
  if (!cache_) cache_ = std::make_shared<GenerationCache>();
}

GenerationRecord Generator::generate_ending(const StoryInstance& instance, const std::string& prompt) {
  const auto hash = sha256_hex(prompt);
  if (auto hit = cache_->find(instance.id, spec_.name, hash)) return *hit;

  Completion done;
  try {
    done = complete_with_retry(*backend_, {&instance, prompt}, spec_.retry, sleeper_, &limiter_, &calls_);
  } catch (const BackendError& e) {
    throw BackendError("generator '" + spec_.name + "' on '" + instance.id + "': " + e.what(), false);
  }
  const std::string& raw = done.text;

  GenerationRecord r;
  r.instance_id = instance.id;
  r.generator_name = spec_.name;
  r.prompt_hash = hash;
  r.prompt = prompt;
  r.raw_output = raw;
  try {
    r.ending = postprocess_ending(raw);
  } catch (const GenerationError&) {
    throw GenerationError("generator '" + spec_.name + "' produced an empty ending for '" + instance.id + "'",
                          raw);
  }
  r.created_at = utc_timestamp();
  r.attempt = done.attempts;
  cache_->put(r);
  // Another worker may have raced us to the same key; the stored record wins.
  return *cache_->find(r.instance_id, r.generator_name, r.prompt_hash);
}

BatchResult Generator::batch_generate(const std::vector<StoryInstance>& instances,
                                      std::optional<int> length_limit, FailurePolicy policy) {
  const std::size_t n = instances.size();
  std::vector<std::optional<GenerationRecord>> slots(n);
  std::vector<std::optional<std::string>> failures(n);
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        auto prompt = render_prompt(PromptSpec::for_instance(instances[i], length_limit));
        slots[i] = generate_ending(instances[i], prompt);
      } catch (const Error& e) {
        failures[i] = e.what();
        if (policy == FailurePolicy::kFailFast) {
          std::lock_guard lock(err_mu);
          if (!first_error) first_error = std::current_exception();
          stop = true;
        }
      }
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(spec_.concurrency), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  BatchResult out;
  out.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) out.records.push_back(std::move(*slots[i]));
    else if (failures[i]) out.errors.push_back({i, instances[i].id, *failures[i]});
  }
  return out;
}

}  // namespace endeval
