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

#include "endeval/scorers/external_mrc.hpp"

#include <cstdlib>
#include <sys/wait.h>

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"

namespace endeval {

namespace {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    char tmpl[] = "/tmp/endeval-mrc-XXXXXX";
    if (!mkdtemp(tmpl)) throw Error("cannot create temp dir");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

json labelled(const StoryInstance& s) {
  auto j = to_json(McQuery::from_instance(s));
  j["label"] = s.gold_label;
  return j;
}

void write_labelled(const std::filesystem::path& p, const std::vector<StoryInstance>& v) {
  std::vector<json> rows;
  for (const auto& s : v) rows.push_back(labelled(s));
  write_jsonl(p, rows);
}

}  // namespace

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  return out + "'";
}

void run_command(const std::string& command) {
  int status = std::system(command.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw BackendError("command failed (status " + std::to_string(status) + "): " + command, false);
}

json to_json(const ExternalMrcConfig& c) {
  return json{{"command", c.command}, {"hyperparameters", c.hyperparameters}, {"batch_size", c.batch_size}};
}

ExternalMrcConfig external_config_from_json(const json& j) {
  ExternalMrcConfig c;
  c.command = j.value("command", c.command);
  c.hyperparameters = j.value("hyperparameters", c.hyperparameters);
  c.batch_size = j.value("batch_size", c.batch_size);
  if (c.batch_size == 0) throw ConfigError("external MRC batch_size must be positive");
  return c;
}

ExternalMrc::ExternalMrc(std::filesystem::path checkpoint, ExternalMrcConfig config)
    : checkpoint_(std::move(checkpoint)), config_(std::move(config)) {
  if (!std::filesystem::is_directory(checkpoint_))
    throw NotFoundError("MRC checkpoint directory not found: " + checkpoint_.string());
  std::string ident = config_.command;
  for (const char* f : {"model.json", "metrics.json"})
    if (std::filesystem::exists(checkpoint_ / f)) ident += read_text_file(checkpoint_ / f);
  id_ = "mrc-external@" + sha256_hex(ident).substr(0, 12);
}

McPrediction ExternalMrc::predict(const McQuery& query) const {
  return predict_batch(std::span<const McQuery>(&query, 1)).front();
}

std::vector<McPrediction> ExternalMrc::predict_batch(std::span<const McQuery> queries) const {
  std::vector<McPrediction> out;
  out.reserve(queries.size());
  for (std::size_t start = 0; start < queries.size(); start += config_.batch_size) {
    auto chunk = queries.subspan(start, std::min(config_.batch_size, queries.size() - start));
    TempDir tmp;
    std::vector<json> rows;
    for (const auto& q : chunk) rows.push_back(to_json(q));
    write_jsonl(tmp.path() / "queries.jsonl", rows);
    run_command(config_.command + " predict --checkpoint " + shell_quote(checkpoint_.string()) + " --in " +
                shell_quote((tmp.path() / "queries.jsonl").string()) + " --out " +
                shell_quote((tmp.path() / "scores.jsonl").string()));
    auto lines = read_jsonl(tmp.path() / "scores.jsonl");
    if (lines.size() != chunk.size())
      throw BackendError("external MRC returned " + std::to_string(lines.size()) + " score rows for " +
                         std::to_string(chunk.size()) + " queries", false);
    for (const auto& l : lines) {
      const auto& s = l.value.at("scores");
      if (!s.is_array() || s.size() != kEndingCount) throw BackendError("external MRC: scores must have 4 entries", false);
      std::array<double, kEndingCount> scores{};
      for (std::size_t k = 0; k < kEndingCount; ++k) scores[k] = s[k].get<double>();
      out.push_back(prediction_from_scores(scores, ScoreKind::kLogits));
    }
  }
  return out;
}

json ExternalMrc::train(const ExternalMrcConfig& config, const std::vector<StoryInstance>& train,
                        const std::vector<StoryInstance>& valid, const std::vector<StoryInstance>& test,
                        const std::filesystem::path& out_dir) {
  TempDir tmp;
  write_labelled(tmp.path() / "train.jsonl", train);
  write_labelled(tmp.path() / "valid.jsonl", valid);
  write_labelled(tmp.path() / "test.jsonl", test);
  write_json_file(tmp.path() / "config.json", config.hyperparameters);
  std::filesystem::create_directories(out_dir);
  run_command(config.command + " train --train " + shell_quote((tmp.path() / "train.jsonl").string()) +
              " --valid " + shell_quote((tmp.path() / "valid.jsonl").string()) + " --test " +
              shell_quote((tmp.path() / "test.jsonl").string()) + " --out " + shell_quote(out_dir.string()) +
              " --config " + shell_quote((tmp.path() / "config.json").string()));
  return read_json_file(out_dir / "metrics.json");
}

}  // namespace endeval
