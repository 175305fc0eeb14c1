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

#include "endeval/generation/backend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"
#include "endeval/common/http.hpp"

namespace endeval {

std::string to_string(BackendKind k) {
  switch (k) {
    case BackendKind::kRemoteApi: return "remote-api";
    case BackendKind::kLocalCheckpoint: return "local-checkpoint";
    case BackendKind::kFixture: return "fixture";
    case BackendKind::kOracle: return "oracle";
  }
  return "?";
}

BackendKind parse_backend_kind(const std::string& s) {
  if (s == "remote-api") return BackendKind::kRemoteApi;
  if (s == "local-checkpoint") return BackendKind::kLocalCheckpoint;
  if (s == "fixture") return BackendKind::kFixture;
  if (s == "oracle") return BackendKind::kOracle;
  throw ConfigError("unknown generator backend '" + s + "'");
}

std::chrono::milliseconds RetryPolicy::delay_before(int attempt) const {
  double ms = static_cast<double>(initial_backoff.count()) * std::pow(backoff_factor, attempt - 2);
  ms = std::min(ms, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<long long>(ms));
}

std::string GeneratorSpec::fingerprint() const {
  json j{{"name", name},
         {"backend", to_string(backend)},
         {"endpoint_or_checkpoint", endpoint_or_checkpoint},
         {"decode_params", decode_params},
         {"api_style", remote.api_style},
         {"model", remote.model},
         {"command", command}};
  return sha256_hex(canonical_dump(j));
}

void validate(const GeneratorSpec& spec) {
  if (spec.name.empty()) throw ConfigError("generator without a name");
  auto where = "generator '" + spec.name + "': ";
  switch (spec.backend) {
    case BackendKind::kFixture:
      if (spec.endpoint_or_checkpoint.empty()) throw ConfigError(where + "fixture backend needs a fixture file");
      break;
    case BackendKind::kRemoteApi:
      if (spec.endpoint_or_checkpoint.empty()) throw ConfigError(where + "remote-api backend needs an endpoint URL");
      if (spec.remote.api_style != "chat" && spec.remote.api_style != "completions")
        throw ConfigError(where + "api_style must be 'chat' or 'completions'");
      break;
    case BackendKind::kLocalCheckpoint:
      if (spec.command.empty()) throw ConfigError(where + "local-checkpoint backend needs a command");
      break;
    case BackendKind::kOracle:
      break;
  }
  if (spec.retry.max_attempts < 1) throw ConfigError(where + "max_attempts must be >= 1");
  if (spec.concurrency < 1) throw ConfigError(where + "concurrency must be >= 1");
  if (!spec.decode_params.is_object()) throw ConfigError(where + "decode_params must be an object");
}

json to_json(const GeneratorSpec& s) {
  return json{{"name", s.name},
              {"backend", to_string(s.backend)},
              {"endpoint_or_checkpoint", s.endpoint_or_checkpoint},
              {"decode_params", s.decode_params},
              {"api_style", s.remote.api_style},
              {"model", s.remote.model},
              {"auth_env", s.remote.auth_env},
              {"response_pointer", s.remote.response_pointer},
              {"timeout_seconds", s.remote.timeout_seconds},
              {"command", s.command},
              {"max_attempts", s.retry.max_attempts},
              {"initial_backoff_ms", s.retry.initial_backoff.count()},
              {"backoff_factor", s.retry.backoff_factor},
              {"max_backoff_ms", s.retry.max_backoff.count()},
              {"concurrency", s.concurrency},
              {"requests_per_second", s.requests_per_second}};
}

GeneratorSpec generator_spec_from_json(const json& j) {
  GeneratorSpec s;
  try {
    s.name = j.at("name").get<std::string>();
    s.backend = parse_backend_kind(j.at("backend").get<std::string>());
    s.endpoint_or_checkpoint = j.value("endpoint_or_checkpoint", "");
    s.decode_params = j.value("decode_params", json::object());
    s.remote.api_style = j.value("api_style", "chat");
    s.remote.model = j.value("model", "");
    s.remote.auth_env = j.value("auth_env", "");
    s.remote.response_pointer = j.value("response_pointer", "");
    s.remote.timeout_seconds = j.value("timeout_seconds", 120);
    s.command = j.value("command", "");
    s.retry.max_attempts = j.value("max_attempts", 5);
    s.retry.initial_backoff = std::chrono::milliseconds(j.value("initial_backoff_ms", 500));
    s.retry.backoff_factor = j.value("backoff_factor", 2.0);
    s.retry.max_backoff = std::chrono::milliseconds(j.value("max_backoff_ms", 30000));
    s.concurrency = j.value("concurrency", 4);
    s.requests_per_second = j.value("requests_per_second", 0.0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("generator spec: ") + e.what());
  }
  validate(s);
  return s;
}

FixtureBackend::FixtureBackend(const std::filesystem::path& path) {
  for (const auto& r : read_jsonl(path)) {
    const auto& v = r.value;
    if (!v.is_object() || !v.contains("instance_id"))
      throw LoadError(path.string() + ": record " + std::to_string(r.index) + ": missing 'instance_id'");
    auto key = v.contains("output") ? "output" : "raw_output";
    if (!v.contains(key) || !v.at(key).is_string())
      throw LoadError(path.string() + ": record " + std::to_string(r.index) + ": missing 'output'");
    outputs_[v.at("instance_id").get<std::string>()] = v.at(key).get<std::string>();
  }
}

std::string FixtureBackend::complete(const GenerationRequest& request) {
  if (!request.instance) throw BackendError("fixture backend needs an instance-bound request", false);
  auto it = outputs_.find(request.instance->id);
  if (it == outputs_.end())
    throw BackendError("fixture has no output for instance '" + request.instance->id + "'", false);
  return it->second;
}

std::string OracleBackend::complete(const GenerationRequest& request) {
  if (!request.instance) throw BackendError("oracle backend needs an instance-bound request", false);
  return request.instance->gold_ending();
}

RemoteApiBackend::RemoteApiBackend(std::string url, RemoteApiOptions options, json decode_params)
    : url_(std::move(url)), options_(std::move(options)), decode_params_(std::move(decode_params)) {
  http::parse_url(url_);
}

std::string RemoteApiBackend::complete(const GenerationRequest& request) {
  json body = decode_params_.is_object() ? decode_params_ : json::object();
  if (!options_.model.empty()) body["model"] = options_.model;
  std::string pointer = options_.response_pointer;
  if (options_.api_style == "completions") {
    body["prompt"] = request.prompt;
    if (pointer.empty()) pointer = "/choices/0/text";
  } else {
    body["messages"] = json::array({json{{"role", "user"}, {"content", request.prompt}}});
    if (pointer.empty()) pointer = "/choices/0/message/content";
  }
  std::map<std::string, std::string> headers;
  if (!options_.auth_env.empty()) {
    const char* token = std::getenv(options_.auth_env.c_str());
    if (!token || !*token)
      throw BackendError("auth token env var " + options_.auth_env + " is not set", false);
    headers["Authorization"] = std::string("Bearer ") + token;
  }
  auto res = http::post_json(url_, body.dump(), headers, std::chrono::seconds(options_.timeout_seconds));
  if (res.status != 200) {
    throw BackendError("HTTP " + std::to_string(res.status) + " from " + url_ + ": " + res.body.substr(0, 200),
                       http::is_retryable_status(res.status));
  }
  try {
    auto reply = json::parse(res.body);
    const auto& text = reply.at(json::json_pointer(pointer));
    if (!text.is_string()) throw BackendError("response field " + pointer + " is not a string");
    return text.get<std::string>();
  } catch (const json::exception& e) {
    throw BackendError("unexpected response from " + url_ + ": " + e.what());
  }
}

LocalCommandBackend::LocalCommandBackend(std::string command, std::string checkpoint)
    : command_(std::move(command)) {
  const std::string placeholder = "{checkpoint}";
  for (auto pos = command_.find(placeholder); pos != std::string::npos;
       pos = command_.find(placeholder, pos + checkpoint.size()))
    command_.replace(pos, placeholder.size(), checkpoint);
}

std::string LocalCommandBackend::complete(const GenerationRequest& request) {
  char tmpl[] = "/tmp/endeval-prompt-XXXXXX";
  int fd = mkstemp(tmpl);
  if (fd < 0) throw BackendError("cannot create prompt temp file", false);
  std::filesystem::path prompt_file(tmpl);
  {
    FILE* f = fdopen(fd, "w");
    std::fwrite(request.prompt.data(), 1, request.prompt.size(), f);
    std::fclose(f);
  }
  // Subshell so the redirect feeds the whole command, not its last part.
  std::string cmd = "(" + command_ + "\n) < '" + prompt_file.string() + "'";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(prompt_file);
    throw BackendError("cannot start: " + command_);
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  std::filesystem::remove(prompt_file);
  if (status != 0) throw BackendError("command exited with status " + std::to_string(status) + ": " + command_);
  return out;
}

std::unique_ptr<TextBackend> make_backend(const GeneratorSpec& spec) {
  validate(spec);
  switch (spec.backend) {
    case BackendKind::kFixture:
      return std::make_unique<FixtureBackend>(std::filesystem::path(spec.endpoint_or_checkpoint));
    case BackendKind::kOracle:
      return std::make_unique<OracleBackend>();
    case BackendKind::kRemoteApi:
      return std::make_unique<RemoteApiBackend>(spec.endpoint_or_checkpoint, spec.remote, spec.decode_params);
    case BackendKind::kLocalCheckpoint:
      return std::make_unique<LocalCommandBackend>(spec.command, spec.endpoint_or_checkpoint);
  }
  throw ConfigError("unhandled backend");
}

RateLimiter::RateLimiter(double rps) {
  if (rps > 0)
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / rps));
}

void RateLimiter::acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

}  // namespace endeval
