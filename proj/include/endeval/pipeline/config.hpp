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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "endeval/common/error.hpp"
#include "endeval/common/jsonl.hpp"
#include "endeval/corpus/splits.hpp"
#include "endeval/generation/backend.hpp"
#include "endeval/generation/generator.hpp"
#include "endeval/metrics/embedder.hpp"
#include "endeval/scorers/evaluators.hpp"

namespace endeval {

// Every problem found in a config file, reported together.
class ConfigValidationError : public ConfigError {
 public:
  explicit ConfigValidationError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

// Fully resolved run description. Relative paths in the file are resolved
// against the file's directory.
struct RunConfig {
  std::filesystem::path dataset_path;
  std::string dataset_format = "canonical";  // adapter name
  std::optional<std::filesystem::path> adapter_table;

  std::uint64_t split_seed = 0;
  std::optional<SplitSizes> split_sizes;           // default: published proportions
  std::optional<std::filesystem::path> split_manifest;  // reuse instead of computing
  std::string evaluate_on = "gen_eval";             // gen_eval | mrc_test | all

  std::optional<int> length_limit;  // one length condition per run
  std::vector<GeneratorSpec> generators;
  ScorerSpec scorer;
  EmbedderSpec embedder;
  FailurePolicy failure_policy = FailurePolicy::kFailFast;

  std::filesystem::path output_dir;
  std::filesystem::path generation_cache;  // default: <output_dir>/cache/generations.jsonl
};

json to_json(const RunConfig& c);
// Digest of to_json(c) without output and cache locations; cited by every report.
std::string config_hash(const RunConfig& c);

// Validates `doc` as if read from a file in `base_dir`. Throws
// ConfigValidationError listing every unknown key, bad value and missing path.
RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir);
RunConfig validate_config(const std::filesystem::path& path);

std::string to_string(FailurePolicy p);

}  // namespace endeval
