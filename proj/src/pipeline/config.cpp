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

#include "endeval/pipeline/config.hpp"

#include <set>
#include <sstream>

#include "endeval/common/digest.hpp"
#include "endeval/corpus/prompt.hpp"

namespace endeval {

namespace fs = std::filesystem;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::ostringstream ss;
  ss << errors.size() << " config error" << (errors.size() == 1 ? "" : "s") << ":";
  for (const auto& e : errors) ss << "\n  - " << e;
  return ss.str();
}

const std::set<std::string> kTopKeys{"dataset", "split",    "length_condition", "generators",    "scorer",
                                     "embedder", "output_dir", "cache",         "failure_policy"};
const std::set<std::string> kDatasetKeys{"path", "format", "adapter_table"};
const std::set<std::string> kSplitKeys{"seed", "sizes", "manifest", "evaluate_on"};
const std::set<std::string> kSizeKeys{"mrc_train", "mrc_valid", "mrc_test", "gen_eval"};
const std::set<std::string> kGeneratorKeys{"name",          "backend",          "endpoint_or_checkpoint", "decode_params",
                                           "api_style",     "model",            "auth_env",               "response_pointer",
                                           "timeout_seconds", "command",        "max_attempts",           "initial_backoff_ms",
                                           "backoff_factor", "max_backoff_ms",  "concurrency",            "requests_per_second"};
const std::set<std::string> kScorerKeys{"backend", "stub", "mrc", "nsp", "judge"};
const std::set<std::string> kStubKeys{"mode", "seed"};
const std::set<std::string> kMrcKeys{"checkpoint"};
const std::set<std::string> kNspKeys{"endpoint", "threshold"};
const std::set<std::string> kJudgeKeys{"model", "prompt_version"};
const std::set<std::string> kEmbedderKeys{"backend", "model", "location", "auth_env"};
const std::set<std::string> kCacheKeys{"generations"};

class Checker {
 public:
  explicit Checker(fs::path base) : base_(std::move(base)) {}

  void error(const std::string& msg) { errors_.push_back(msg); }

  // Returns false (and records an error) when `j` is not an object.
  bool object(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      error(where + ": expected an object");
      return false;
    }
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) error("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
    return true;
  }

  fs::path resolve(const std::string& p) const {
    fs::path path(p);
    return path.is_absolute() ? path : (base_ / path).lexically_normal();
  }

  fs::path existing(const std::string& p, const std::string& where) {
    auto path = resolve(p);
    if (!fs::exists(path)) error(where + ": path not found: " + path.string());
    return path;
  }

  template <typename T, typename F>
  void attempt(const std::string& where, F&& f, T& out) {
    try {
      out = f();
    } catch (const std::exception& e) {
      error(where + ": " + e.what());
    }
  }

  std::vector<std::string>& errors() { return errors_; }

 private:
  fs::path base_;
  std::vector<std::string> errors_;
};

std::optional<int> length_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_number_integer()) {
    int v = j.get<int>();
    if (v <= 0) throw ConfigError("length limit must be positive");
    return v;
  }
  if (j.is_string()) return parse_length_condition(j.get<std::string>());
  throw ConfigError("expected \"none\" or a positive integer");
}

}  // namespace

ConfigValidationError::ConfigValidationError(std::vector<std::string> errors)
    : ConfigError(join_errors(errors)), errors_(std::move(errors)) {}

std::string to_string(FailurePolicy p) { return p == FailurePolicy::kFailFast ? "fail-fast" : "collect"; }

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  Checker c(base_dir);
  RunConfig cfg;
  if (!c.object(doc, "", kTopKeys)) throw ConfigValidationError(c.errors());

  // dataset
  if (!doc.contains("dataset")) {
    c.error("missing required key 'dataset'");
  } else if (const auto& d = doc.at("dataset"); c.object(d, "dataset", kDatasetKeys)) {
    if (!d.contains("path") || !d.at("path").is_string())
      c.error("dataset.path: required string");
    else
      cfg.dataset_path = c.existing(d.at("path").get<std::string>(), "dataset.path");
    if (d.contains("format")) {
      if (d.at("format").is_string())
        cfg.dataset_format = d.at("format").get<std::string>();
      else
        c.error("dataset.format: expected a string");
    }
    if (d.contains("adapter_table")) {
      if (d.at("adapter_table").is_string())
        cfg.adapter_table = c.existing(d.at("adapter_table").get<std::string>(), "dataset.adapter_table");
      else
        c.error("dataset.adapter_table: expected a string");
    }
  }

  // split
  if (doc.contains("split")) {
    if (const auto& s = doc.at("split"); c.object(s, "split", kSplitKeys)) {
      if (s.contains("seed")) {
        if (s.at("seed").is_number_unsigned())
          cfg.split_seed = s.at("seed").get<std::uint64_t>();
        else
          c.error("split.seed: expected a non-negative integer");
      }
      if (s.contains("sizes") && c.object(s.at("sizes"), "split.sizes", kSizeKeys)) {
        SplitSizes sizes;
        const auto& z = s.at("sizes");
        for (auto [key, field] : {std::pair{"mrc_train", &sizes.mrc_train}, std::pair{"mrc_valid", &sizes.mrc_valid},
                                  std::pair{"mrc_test", &sizes.mrc_test}, std::pair{"gen_eval", &sizes.gen_eval}}) {
          if (!z.contains(key) || !z.at(key).is_number_unsigned())
            c.error(std::string("split.sizes.") + key + ": required non-negative integer");
          else
            *field = z.at(key).get<std::size_t>();
        }
        cfg.split_sizes = sizes;
      }
      if (s.contains("manifest")) {
        if (s.at("manifest").is_string())
          cfg.split_manifest = c.existing(s.at("manifest").get<std::string>(), "split.manifest");
        else
          c.error("split.manifest: expected a string");
      }
      if (s.contains("evaluate_on")) {
        auto v = s.at("evaluate_on").is_string() ? s.at("evaluate_on").get<std::string>() : std::string();
        if (v != "gen_eval" && v != "mrc_test" && v != "all")
          c.error("split.evaluate_on: expected gen_eval, mrc_test or all");
        else
          cfg.evaluate_on = v;
      }
    }
  }

  if (doc.contains("length_condition"))
    c.attempt("length_condition", [&] { return length_from_json(doc.at("length_condition")); }, cfg.length_limit);

  // generators
  if (!doc.contains("generators") || !doc.at("generators").is_array() || doc.at("generators").empty()) {
    c.error("generators: required non-empty list");
  } else {
    std::set<std::string> names;
    std::size_t i = 0;
    for (const auto& g : doc.at("generators")) {
      auto where = "generators[" + std::to_string(i++) + "]";
      if (!c.object(g, where, kGeneratorKeys)) continue;
      try {
        auto spec = generator_spec_from_json(g);
        if (!names.insert(spec.name).second) c.error(where + ": duplicate generator name '" + spec.name + "'");
        if (spec.backend == BackendKind::kFixture || spec.backend == BackendKind::kLocalCheckpoint) {
          if (!spec.endpoint_or_checkpoint.empty())
            spec.endpoint_or_checkpoint = c.existing(spec.endpoint_or_checkpoint, where + ".endpoint_or_checkpoint");
        }
        cfg.generators.push_back(std::move(spec));
      } catch (const std::exception& e) {
        c.error(where + ": " + e.what());
      }
    }
  }

  // scorer
  if (!doc.contains("scorer")) {
    c.error("missing required key 'scorer'");
  } else if (const auto& s = doc.at("scorer"); c.object(s, "scorer", kScorerKeys)) {
    auto& sc = cfg.scorer;
    if (!s.contains("backend") || !s.at("backend").is_string())
      c.error("scorer.backend: required (mrc, nsp, judge or stub)");
    else
      c.attempt("scorer.backend", [&] { return parse_evaluator_kind(s.at("backend").get<std::string>()); }, sc.backend);
    if (s.contains("stub") && c.object(s.at("stub"), "scorer.stub", kStubKeys)) {
      const auto& st = s.at("stub");
      if (st.contains("mode"))
        c.attempt("scorer.stub.mode", [&] { return parse_stub_mode(st.at("mode").get<std::string>()); }, sc.stub_mode);
      if (st.contains("seed")) {
        if (st.at("seed").is_number_unsigned())
          sc.stub_seed = st.at("seed").get<std::uint64_t>();
        else
          c.error("scorer.stub.seed: expected a non-negative integer");
      }
    }
    if (s.contains("mrc") && c.object(s.at("mrc"), "scorer.mrc", kMrcKeys)) {
      const auto& m = s.at("mrc");
      if (!m.contains("checkpoint") || !m.at("checkpoint").is_string())
        c.error("scorer.mrc.checkpoint: required string");
      else
        sc.checkpoint = c.existing(m.at("checkpoint").get<std::string>(), "scorer.mrc.checkpoint").string();
    }
    if (s.contains("nsp") && c.object(s.at("nsp"), "scorer.nsp", kNspKeys)) {
      const auto& n = s.at("nsp");
      sc.nsp_endpoint = n.value("endpoint", "");
      if (n.contains("threshold")) {
        if (!n.at("threshold").is_number())
          c.error("scorer.nsp.threshold: expected a number");
        else
          sc.nsp_threshold = n.at("threshold").get<double>();
      }
      if (sc.nsp_threshold < 0 || sc.nsp_threshold > 1) c.error("scorer.nsp.threshold: must be in [0, 1]");
    }
    if (s.contains("judge") && c.object(s.at("judge"), "scorer.judge", kJudgeKeys)) {
      const auto& jd = s.at("judge");
      if (jd.contains("model") && c.object(jd.at("model"), "scorer.judge.model", kGeneratorKeys)) {
        try {
          sc.judge_model = generator_spec_from_json(jd.at("model"));
        } catch (const std::exception& e) {
          c.error(std::string("scorer.judge.model: ") + e.what());
        }
      }
      sc.judge_prompt_version = jd.value("prompt_version", sc.judge_prompt_version);
    }
    switch (sc.backend) {
      case EvaluatorKind::kMrc:
        if (sc.checkpoint.empty() && !s.contains("mrc")) c.error("scorer.mrc.checkpoint: required for the mrc scorer");
        break;
      case EvaluatorKind::kNsp:
        if (sc.nsp_endpoint.empty()) c.error("scorer.nsp.endpoint: required for the nsp scorer");
        break;
      case EvaluatorKind::kJudge:
        if (!sc.judge_model) c.error("scorer.judge.model: required for the judge scorer");
        break;
      case EvaluatorKind::kStub:
        break;
    }
  }

  // embedder
  if (doc.contains("embedder") && c.object(doc.at("embedder"), "embedder", kEmbedderKeys)) {
    try {
      cfg.embedder = embedder_spec_from_json(doc.at("embedder"));
      if (cfg.embedder.backend == "table")
        cfg.embedder.location = c.existing(cfg.embedder.location, "embedder.location").string();
    } catch (const std::exception& e) {
      c.error(std::string("embedder: ") + e.what());
    }
  }

  if (!doc.contains("output_dir") || !doc.at("output_dir").is_string())
    c.error("output_dir: required string");
  else
    cfg.output_dir = c.resolve(doc.at("output_dir").get<std::string>());

  if (doc.contains("cache") && c.object(doc.at("cache"), "cache", kCacheKeys)) {
    if (doc.at("cache").contains("generations")) {
      if (doc.at("cache").at("generations").is_string())
        cfg.generation_cache = c.resolve(doc.at("cache").at("generations").get<std::string>());
      else
        c.error("cache.generations: expected a string");
    }
  }
  if (cfg.generation_cache.empty() && !cfg.output_dir.empty())
    cfg.generation_cache = cfg.output_dir / "cache" / "generations.jsonl";

  if (doc.contains("failure_policy")) {
    auto v = doc.at("failure_policy").is_string() ? doc.at("failure_policy").get<std::string>() : std::string();
    if (v == "fail-fast")
      cfg.failure_policy = FailurePolicy::kFailFast;
    else if (v == "collect")
      cfg.failure_policy = FailurePolicy::kCollect;
    else
      c.error("failure_policy: expected fail-fast or collect");
  }

  if (!c.errors().empty()) throw ConfigValidationError(c.errors());
  return cfg;
}

RunConfig validate_config(const fs::path& path) {
  json doc;
  try {
    doc = read_json_file(path);
  } catch (const std::exception& e) {
    throw ConfigValidationError({e.what()});
  }
  return parse_run_config(doc, fs::absolute(path).parent_path());
}

json to_json(const RunConfig& c) {
  json gens = json::array();
  for (const auto& g : c.generators) gens.push_back(to_json(g));
  json scorer{{"backend", to_string(c.scorer.backend)}};
  switch (c.scorer.backend) {
    case EvaluatorKind::kStub:
      scorer["stub"] = json{{"mode", to_string(c.scorer.stub_mode)}, {"seed", c.scorer.stub_seed}};
      break;
    case EvaluatorKind::kMrc:
      scorer["mrc"] = json{{"checkpoint", c.scorer.checkpoint}};
      break;
    case EvaluatorKind::kNsp:
      scorer["nsp"] = json{{"endpoint", c.scorer.nsp_endpoint}, {"threshold", c.scorer.nsp_threshold}};
      break;
    case EvaluatorKind::kJudge:
      scorer["judge"] = json{{"model", c.scorer.judge_model ? to_json(*c.scorer.judge_model) : json(nullptr)},
                             {"prompt_version", c.scorer.judge_prompt_version}};
      break;
  }
  json split{{"seed", c.split_seed}, {"evaluate_on", c.evaluate_on}};
  if (c.split_sizes)
    split["sizes"] = json{{"mrc_train", c.split_sizes->mrc_train},
                          {"mrc_valid", c.split_sizes->mrc_valid},
                          {"mrc_test", c.split_sizes->mrc_test},
                          {"gen_eval", c.split_sizes->gen_eval}};
  if (c.split_manifest) split["manifest"] = c.split_manifest->string();
  json dataset{{"path", c.dataset_path.string()}, {"format", c.dataset_format}};
  if (c.adapter_table) dataset["adapter_table"] = c.adapter_table->string();
  return json{{"dataset", dataset},
              {"split", split},
              {"length_condition", length_condition_tag(c.length_limit)},
              {"generators", gens},
              {"scorer", scorer},
              {"embedder", to_json(c.embedder)},
              {"output_dir", c.output_dir.string()},
              {"cache", json{{"generations", c.generation_cache.string()}}},
              {"failure_policy", to_string(c.failure_policy)}};
}

std::string config_hash(const RunConfig& c) {
  auto j = to_json(c);
  // Where results land does not change them.
  j.erase("output_dir");
  j.erase("cache");
  return sha256_hex(canonical_dump(j));
}

}  // namespace endeval
