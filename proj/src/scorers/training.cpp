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

#include "endeval/scorers/training.hpp"

#include <unordered_set>

#include "endeval/common/error.hpp"

namespace endeval {

json to_json(const TrainingConfig& c) {
  return json{{"backend", c.backend}, {"lexical", to_json(c.lexical)}, {"external", to_json(c.external)}};
}

TrainingConfig training_config_from_json(const json& j) {
  TrainingConfig c;
  c.backend = j.value("backend", c.backend);
  if (c.backend != "lexical" && c.backend != "external")
    throw ConfigError("MRC training backend must be 'lexical' or 'external', got '" + c.backend + "'");
  if (j.contains("lexical")) c.lexical = lexical_config_from_json(j.at("lexical"));
  if (j.contains("external")) c.external = external_config_from_json(j.at("external"));
  return c;
}

json to_json(const TrainingMetrics& m) {
  json j{{"valid_accuracy", m.valid_accuracy}, {"test_accuracy", m.test_accuracy},
         {"n_train", m.n_train}, {"n_valid", m.n_valid}, {"n_test", m.n_test}};
  for (const auto& [k, v] : m.extra.items()) j[k] = v;
  return j;
}

void check_no_leakage(const std::vector<StoryInstance>& instances, const SplitManifest& manifest,
                      const std::string& role) {
  std::unordered_set<std::string> held(manifest.gen_eval.begin(), manifest.gen_eval.end());
  for (const auto& s : instances)
    if (held.count(s.id))
      throw LeakageError(role + " set contains '" + s.id + "', which is reserved for generation evaluation");
}

double mrc_accuracy(const MrcModel& model, const std::vector<StoryInstance>& instances) {
  if (instances.empty()) return 0.0;
  std::vector<McQuery> queries;
  queries.reserve(instances.size());
  for (const auto& s : instances) queries.push_back(McQuery::from_instance(s));
  auto preds = model.predict_batch(queries);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) hits += preds[i].label == instances[i].gold_label;
  return static_cast<double>(hits) / static_cast<double>(instances.size());
}

TrainedModel train_mrc(const std::vector<StoryInstance>& train, const std::vector<StoryInstance>& valid,
                       const std::vector<StoryInstance>& test, const SplitManifest& manifest,
                       const TrainingConfig& config, const std::filesystem::path& dir) {
  check_no_leakage(train, manifest, "training");
  check_no_leakage(valid, manifest, "validation");
  check_no_leakage(test, manifest, "test");
  if (train.empty()) throw DomainError("train_mrc: empty training set");

  TrainedModel out;
  out.metrics.n_train = train.size();
  out.metrics.n_valid = valid.size();
  out.metrics.n_test = test.size();
  std::filesystem::create_directories(dir);

  if (config.backend == "lexical") {
    auto to_queries = [](const std::vector<StoryInstance>& v, std::vector<McQuery>& q, std::vector<int>& l) {
      for (const auto& s : v) {
        q.push_back(McQuery::from_instance(s));
        l.push_back(s.gold_label);
      }
    };
    std::vector<McQuery> tq, vq;
    std::vector<int> tl, vl;
    to_queries(train, tq, tl);
    to_queries(valid, vq, vl);
    auto model = std::make_shared<LexicalMrc>(config.lexical);
    auto history = model->fit(tq, tl, vq, vl);
    model->save(dir);
    out.metrics.valid_accuracy = mrc_accuracy(*model, valid);
    out.metrics.test_accuracy = mrc_accuracy(*model, test);
    json h = json::array();
    for (const auto& e : history)
      h.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"valid_accuracy", e.valid_accuracy}});
    out.metrics.extra["history"] = h;
    out.metrics.extra["model_id"] = model->id();
    out.model = model;
  } else {
    auto m = ExternalMrc::train(config.external, train, valid, test, dir);
    out.metrics.valid_accuracy = m.value("valid_accuracy", 0.0);
    out.metrics.test_accuracy = m.value("test_accuracy", 0.0);
    for (const auto& [k, v] : m.items())
      if (k != "valid_accuracy" && k != "test_accuracy") out.metrics.extra[k] = v;
    write_json_file(dir / "model.json", json{{"backend", "external"}, {"config", to_json(config.external)}});
    out.model = std::make_shared<ExternalMrc>(dir, config.external);
  }

  write_json_file(dir / "training_config.json", to_json(config));
  write_text_atomic(dir / "split_manifest.sha256", manifest_hash(manifest) + "\n");
  write_json_file(dir / "metrics.json", to_json(out.metrics));
  return out;
}

std::shared_ptr<MrcModel> load_mrc_checkpoint(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "model.json"))
    throw NotFoundError("no MRC checkpoint at " + dir.string() + " (model.json missing)");
  auto meta = read_json_file(dir / "model.json");
  auto backend = meta.value("backend", "");
  if (backend == "lexical") return std::make_shared<LexicalMrc>(LexicalMrc::load(dir));
  if (backend == "external")
    return std::make_shared<ExternalMrc>(dir, external_config_from_json(meta.value("config", json::object())));
  throw LoadError(dir.string() + ": unknown MRC backend '" + backend + "'");
}

}  // namespace endeval
