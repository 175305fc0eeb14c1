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

#include "endeval/metrics/eval_run.hpp"

#include "endeval/common/error.hpp"

namespace endeval {

std::size_t EvalRun::scored_count() const { return verdicts.size() - abstain_count(); }

std::size_t EvalRun::abstain_count() const {
  std::size_t n = 0;
  for (const auto& v : verdicts) n += v.abstained;
  return n;
}

double follow_rate(const std::vector<VerdictRow>& verdicts) {
  std::size_t scored = 0, follows = 0;
  for (const auto& v : verdicts) {
    if (v.abstained) continue;
    ++scored;
    follows += v.follows;
  }
  if (scored == 0) throw DomainError("follow rate is undefined without scored verdicts");
  return static_cast<double>(follows) / static_cast<double>(scored);
}

std::pair<std::vector<std::string>, std::vector<std::string>> stratify_follow(const EvalRun& run) {
  std::pair<std::vector<std::string>, std::vector<std::string>> out;
  for (const auto& v : run.verdicts) {
    if (v.abstained) continue;
    (v.follows ? out.first : out.second).push_back(v.instance_id);
  }
  return out;
}

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_get(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void save_eval_run(const std::filesystem::path& path, const EvalRun& r) {
  std::vector<json> rows;
  rows.push_back(json{{"type", "eval_run"},
                      {"generator_name", r.generator_name},
                      {"scorer_id", r.scorer_id},
                      {"scorer_kind", to_string(r.scorer_kind)},
                      {"length_condition", r.length_condition},
                      {"n", r.verdicts.size()},
                      {"ifsm", r.ifsm},
                      {"dissimilarity", opt(r.dissimilarity)},
                      {"dissimilarity_pooled", opt(r.dissimilarity_pooled)},
                      {"dissimilarity_contexts", r.dissimilarity_contexts},
                      {"dissimilarity_singletons", r.dissimilarity_singletons},
                      {"embedder_id", r.embedder_id},
                      {"length_mean_words", r.length_mean_words},
                      {"manifest_hash", r.manifest_hash},
                      {"split_seed", r.split_seed},
                      {"prompt_version", r.prompt_version},
                      {"config_hash", r.config_hash},
                      {"created_at", r.created_at}});
  for (const auto& v : r.verdicts) {
    rows.push_back(json{{"type", "verdict"},
                        {"instance_id", v.instance_id},
                        {"predicted_label", opt(v.predicted_label)},
                        {"gold_label", v.gold_label},
                        {"follows", v.follows},
                        {"abstained", v.abstained},
                        {"ending", v.ending}});
  }
  write_jsonl(path, rows);
}

EvalRun load_eval_run(const std::filesystem::path& path) {
  auto lines = read_jsonl(path);
  if (lines.empty() || lines.front().value.value("type", "") != "eval_run")
    throw LoadError(path.string() + ": missing eval_run header line");
  EvalRun r;
  try {
    const auto& h = lines.front().value;
    r.generator_name = h.at("generator_name").get<std::string>();
    r.scorer_id = h.at("scorer_id").get<std::string>();
    r.scorer_kind = parse_evaluator_kind(h.at("scorer_kind").get<std::string>());
    r.length_condition = h.at("length_condition").get<std::string>();
    r.ifsm = h.at("ifsm").get<double>();
    r.dissimilarity = opt_get<double>(h, "dissimilarity");
    r.dissimilarity_pooled = opt_get<double>(h, "dissimilarity_pooled");
    r.dissimilarity_contexts = h.value("dissimilarity_contexts", std::size_t{0});
    r.dissimilarity_singletons = h.value("dissimilarity_singletons", std::size_t{0});
    r.embedder_id = h.value("embedder_id", "");
    r.length_mean_words = h.at("length_mean_words").get<double>();
    r.manifest_hash = h.at("manifest_hash").get<std::string>();
    r.split_seed = h.at("split_seed").get<std::uint64_t>();
    r.prompt_version = h.at("prompt_version").get<std::string>();
    r.config_hash = h.value("config_hash", "");
    r.created_at = h.value("created_at", "");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto& v = lines[i].value;
      if (v.value("type", "") != "verdict")
        throw LoadError(path.string() + ":" + std::to_string(lines[i].line) + ": expected a verdict line");
      r.verdicts.push_back(VerdictRow{v.at("instance_id").get<std::string>(), opt_get<int>(v, "predicted_label"),
                                      v.at("gold_label").get<int>(), v.at("follows").get<bool>(),
                                      v.value("abstained", false), v.value("ending", "")});
    }
    if (h.contains("n") && h.at("n").get<std::size_t>() != r.verdicts.size())
      throw LoadError(path.string() + ": header announces " + std::to_string(h.at("n").get<std::size_t>()) +
                      " verdicts, file has " + std::to_string(r.verdicts.size()));
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  return r;
}

}  // namespace endeval
