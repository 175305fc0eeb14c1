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
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "endeval/common/jsonl.hpp"
#include "endeval/corpus/story.hpp"

namespace endeval {

enum class BackendKind { kRemoteApi, kLocalCheckpoint, kFixture, kOracle };

std::string to_string(BackendKind k);
BackendKind parse_backend_kind(const std::string& s);

// HTTP chat/completions client settings. The request carries the prompt
// either as a single user message ("chat") or as "prompt" ("completions");
// the reply text is read at `response_pointer` (a JSON pointer).
struct RemoteApiOptions {
  std::string api_style = "chat";
  std::string model;
  std::string auth_env;  // name of the env var holding the bearer token
  std::string response_pointer;  // empty: style default
  int timeout_seconds = 120;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_factor = 2.0;
  std::chrono::milliseconds max_backoff{30000};

  std::chrono::milliseconds delay_before(int attempt) const;  // attempt >= 2
};

struct GeneratorSpec {
  std::string name;
  BackendKind backend = BackendKind::kFixture;
  // URL for remote-api, checkpoint path for local-checkpoint, fixture file
  // for fixture; unused for oracle.
  std::string endpoint_or_checkpoint;
  json decode_params = json::object();

  RemoteApiOptions remote;
  // local-checkpoint: shell command; "{checkpoint}" is substituted and the
  // prompt arrives on stdin.
  std::string command;

  RetryPolicy retry;
  int concurrency = 4;
  double requests_per_second = 0.0;  // 0: unlimited

  // Hash over everything that changes what the backend would produce.
  std::string fingerprint() const;
};

void validate(const GeneratorSpec& spec);
json to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const json& j);

// `instance` is null for requests that are not tied to a story item (judge
// prompts); fixture and oracle backends reject those.
struct GenerationRequest {
  const StoryInstance* instance;
  const std::string& prompt;
};

// One text-generation endpoint. complete() returns the raw model output or
// throws BackendError.
class TextBackend {
 public:
  virtual ~TextBackend() = default;
  virtual std::string complete(const GenerationRequest& request) = 0;
};

// Replays recorded outputs keyed by instance id from a line-delimited file of
// {"instance_id": ..., "output": ...} records.
class FixtureBackend : public TextBackend {
 public:
  explicit FixtureBackend(const std::filesystem::path& path);
  explicit FixtureBackend(std::map<std::string, std::string> outputs) : outputs_(std::move(outputs)) {}
  std::string complete(const GenerationRequest& request) override;

 private:
  std::map<std::string, std::string> outputs_;
};

// Returns the instance's human-written gold ending.
class OracleBackend : public TextBackend {
 public:
  std::string complete(const GenerationRequest& request) override;
};

class RemoteApiBackend : public TextBackend {
 public:
  RemoteApiBackend(std::string url, RemoteApiOptions options, json decode_params);
  std::string complete(const GenerationRequest& request) override;

 private:
  std::string url_;
  RemoteApiOptions options_;
  json decode_params_;
};

class LocalCommandBackend : public TextBackend {
 public:
  LocalCommandBackend(std::string command, std::string checkpoint);
  std::string complete(const GenerationRequest& request) override;

 private:
  std::string command_;
};

std::unique_ptr<TextBackend> make_backend(const GeneratorSpec& spec);

// Spaces calls at least 1/rate seconds apart; shared by all workers of one
// backend.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second);
  void acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::duration interval_{};
  std::chrono::steady_clock::time_point next_{};
};

}  // namespace endeval
