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

#include "endeval/pipeline/pipeline.hpp"

#include <map>

#include "endeval/common/digest.hpp"
#include "endeval/corpus/dataset_io.hpp"
#include "endeval/corpus/prompt.hpp"
#include "endeval/corpus/source_adapter.hpp"
#include "endeval/generation/cache.hpp"
#include "endeval/metrics/dissimilarity.hpp"
#include "endeval/metrics/length.hpp"
#include "endeval/metrics/report.hpp"

namespace endeval {

namespace fs = std::filesystem;

StageError::StageError(std::string stage, fs::path state_dir, const std::string& cause)
    : Error("stage '" + stage + "' failed: " + cause + " (completed stages are kept under " + state_dir.string() +
            "; rerun the same config to resume)"),
      stage_(std::move(stage)),
      state_dir_(std::move(state_dir)) {}

std::string eval_run_filename(const std::string& generator_name, const std::string& length_condition) {
  std::string safe;
  for (char ch : generator_name) safe += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '.') ? ch : '_';
  return safe + "__" + length_condition + ".evalrun.jsonl";
}

namespace {

std::string digest_of(std::initializer_list<std::string> parts) {
  std::string joined;
  for (const auto& p : parts) {
    joined += p;
    joined += '\x1f';
  }
  return sha256_hex(joined);
}

class StageRunner {
 public:
  StageRunner(fs::path root, const PipelineHooks& hooks, PipelineResult& result)
      : root_(std::move(root)), hooks_(hooks), result_(result) {}

  fs::path dir(const std::string& stage, const std::string& key, const std::string& label = {}) const {
    return root_ / "stages" / (stage + (label.empty() ? "" : "-" + label) + "-" + key.substr(0, 16));
  }

  bool done(const fs::path& d) const { return fs::exists(d / "stage.json"); }

  void finish(const std::string& stage, const std::string& key, const fs::path& d, json info = json::object()) {
    info["stage"] = stage;
    info["key"] = key;
    write_json_file(d / "stage.json", info);
  }

  void note(const std::string& stage, const std::string& key, bool reused, const std::string& msg) {
    result_.stages.push_back({stage, key, reused});
    if (hooks_.log) hooks_.log("[" + stage + "] " + (reused ? "reused: " : "") + msg);
  }

  bool stop_after(const std::string& stage) const { return hooks_.stop_after && *hooks_.stop_after == stage; }

  template <typename F>
  auto guarded(const std::string& stage, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(stage, root_ / "stages", e.what());
    }
  }

 private:
  fs::path root_;
  const PipelineHooks& hooks_;
  PipelineResult& result_;
};

std::vector<StoryInstance> evaluation_set(const std::vector<StoryInstance>& all, const SplitManifest& m,
                                          const std::string& which) {
  if (which == "all") return all;
  return select(all, which == "mrc_test" ? m.mrc_test : m.gen_eval);
}

}  // namespace

EvalRun score_generations(const std::vector<GenerationRecord>& records, const std::vector<StoryInstance>& instances,
                          FollowEvaluator& evaluator, const std::string& generator_name,
                          const std::string& length_condition) {
  std::map<std::string, const StoryInstance*> by_id;
  for (const auto& s : instances) by_id.emplace(s.id, &s);
  std::vector<StoryInstance> batch;
  std::vector<std::string> endings;
  for (const auto& r : records) {
    auto it = by_id.find(r.instance_id);
    if (it == by_id.end()) throw NotFoundError("generation for unknown instance '" + r.instance_id + "'");
    batch.push_back(*it->second);
    endings.push_back(r.ending);
  }
  auto verdicts = evaluator.evaluate_batch(batch, endings);
  EvalRun run;
  run.generator_name = generator_name;
  run.scorer_id = evaluator.id();
  run.scorer_kind = evaluator.kind();
  run.length_condition = length_condition;
  for (std::size_t i = 0; i < batch.size(); ++i)
    run.verdicts.push_back(VerdictRow{batch[i].id, verdicts[i].predicted_label, batch[i].gold_label,
                                      verdicts[i].follows, verdicts[i].abstained, endings[i]});
  return run;
}

void attach_metrics(EvalRun& run, const std::vector<GenerationRecord>& records,
                    const std::vector<StoryInstance>& instances, Embedder& embedder) {
  std::map<std::string, const StoryInstance*> by_id;
  for (const auto& s : instances) by_id.emplace(s.id, &s);
  run.ifsm = follow_rate(run.verdicts);
  EndingsByContext groups;
  for (const auto& r : records) {
    auto it = by_id.find(r.instance_id);
    if (it == by_id.end()) throw NotFoundError("generation for unknown instance '" + r.instance_id + "'");
    groups[it->second->context_text()].emplace_back(it->second->question, r.ending);
  }
  try {
    auto dis = compute_dissimilarity(groups, embedder);
    run.dissimilarity = dis.mean_of_context_means;
    run.dissimilarity_pooled = dis.pooled_pair_mean;
    run.dissimilarity_contexts = dis.contexts_scored;
    run.dissimilarity_singletons = dis.contexts_singleton;
  } catch (const DomainError&) {
    // No context with two or more endings: dissimilarity is undefined.
    run.dissimilarity = std::nullopt;
    run.dissimilarity_singletons = groups.size();
  }
  run.embedder_id = embedder.id();
  run.length_mean_words = length_stats(records);
}

PipelineResult run_pipeline(const RunConfig& config, const PipelineHooks& hooks) {
  PipelineResult result;
  StageRunner runner(config.output_dir, hooks, result);
  fs::create_directories(config.output_dir);
  const std::string cfg_hash = config_hash(config);
  const std::string condition = length_condition_tag(config.length_limit);
  const std::string prompt_ver = prompt_version(kEndingTemplateId, config.length_limit);

  // convert
  std::vector<StoryInstance> instances;
  std::string dataset_digest;
  runner.guarded("convert", [&] {
    auto adapter_src = config.adapter_table ? read_text_file(*config.adapter_table) : std::string();
    auto key = digest_of({"convert", sha256_file(config.dataset_path), config.dataset_format, sha256_hex(adapter_src)});
    auto d = runner.dir("convert", key);
    bool reused = runner.done(d);
    if (reused) {
      instances = load_dataset(d / "dataset.jsonl", "canonical");
    } else {
      if (config.adapter_table) {
        auto table = AdapterTable::load(*config.adapter_table);
        instances = load_dataset(config.dataset_path, table.get(config.dataset_format));
      } else {
        instances = load_dataset(config.dataset_path, config.dataset_format);
      }
      fs::create_directories(d);
      save_dataset(d / "dataset.jsonl", instances);
    }
    dataset_digest = dataset_hash(instances);
    if (!reused) runner.finish("convert", key, d, json{{"dataset_hash", dataset_digest}, {"instances", instances.size()}});
    runner.note("convert", key, reused, std::to_string(instances.size()) + " instances");
  });
  if (runner.stop_after("convert")) return result;

  // split
  SplitManifest manifest;
  std::string split_digest;
  runner.guarded("split", [&] {
    std::string sizes_tag = config.split_sizes ? canonical_dump(json{{"mrc_train", config.split_sizes->mrc_train},
                                                                     {"mrc_valid", config.split_sizes->mrc_valid},
                                                                     {"mrc_test", config.split_sizes->mrc_test},
                                                                     {"gen_eval", config.split_sizes->gen_eval}})
                                               : "proportional";
    std::string given = config.split_manifest ? sha256_file(*config.split_manifest) : std::string();
    auto key = digest_of({"split", dataset_digest, std::to_string(config.split_seed), sizes_tag, given});
    auto d = runner.dir("split", key);
    bool reused = runner.done(d);
    if (reused) {
      manifest = load_manifest(d / "manifest.json");
    } else {
      manifest = config.split_manifest ? load_manifest(*config.split_manifest)
                                       : make_splits(instances, config.split_seed, config.split_sizes);
      // Fail here rather than mid-generation if the manifest names unknown ids.
      select(instances, manifest.gen_eval);
      fs::create_directories(d);
      save_manifest(d / "manifest.json", manifest);
    }
    split_digest = manifest_hash(manifest);
    if (!reused) runner.finish("split", key, d, json{{"manifest_hash", split_digest}});
    runner.note("split", key, reused,
                std::to_string(manifest.mrc_train.size()) + "/" + std::to_string(manifest.mrc_valid.size()) + "/" +
                    std::to_string(manifest.mrc_test.size()) + "/" + std::to_string(manifest.gen_eval.size()));
  });
  if (runner.stop_after("split")) return result;

  const auto eval_set =
      runner.guarded("split", [&] { return evaluation_set(instances, manifest, config.evaluate_on); });

  // generate
  struct GenOutput {
    std::string key;
    std::vector<GenerationRecord> records;
  };
  std::vector<GenOutput> generated;
  runner.guarded("generate", [&] {
    fs::create_directories(config.generation_cache.parent_path());
    auto cache = std::make_shared<GenerationCache>(config.generation_cache);
    for (const auto& spec : config.generators) {
      // Fixture contents are part of the key, not just the file name.
      auto source = spec.backend == BackendKind::kFixture ? sha256_file(spec.endpoint_or_checkpoint) : std::string();
      auto key = digest_of({"generate", split_digest, config.evaluate_on, spec.fingerprint(), source, prompt_ver});
      auto d = runner.dir("generate", key, spec.name);
      GenOutput out{key, {}};
      bool reused = runner.done(d);
      if (reused) {
        for (const auto& r : read_jsonl(d / "generations.jsonl")) out.records.push_back(record_from_json(r.value));
      } else {
        auto backend = hooks.backend_factory ? hooks.backend_factory(spec) : std::shared_ptr<TextBackend>(make_backend(spec));
        Generator gen(spec, backend, cache, hooks.sleeper);
        auto batch = gen.batch_generate(eval_set, config.length_limit, config.failure_policy);
        out.records = std::move(batch.records);
        fs::create_directories(d);
        std::vector<json> rows;
        for (const auto& r : out.records) rows.push_back(to_json(r));
        write_jsonl(d / "generations.jsonl", rows);
        if (!batch.errors.empty()) {
          std::vector<json> errs;
          for (const auto& e : batch.errors)
            errs.push_back(json{{"index", e.index}, {"instance_id", e.instance_id}, {"message", e.message}});
          write_jsonl(d / "errors.jsonl", errs);
          result.generation_failures += batch.errors.size();
          // Left unfinished so the next run retries the failures; successes come from the cache.
        } else {
          runner.finish("generate", key, d, json{{"records", out.records.size()}});
        }
      }
      if (out.records.empty()) throw GenerationError("generator '" + spec.name + "' produced no endings", "");
      runner.note("generate", key, reused, spec.name + ": " + std::to_string(out.records.size()) + " records");
      generated.push_back(std::move(out));
    }
  });
  if (runner.stop_after("generate")) return result;

  // score
  std::vector<std::pair<std::string, EvalRun>> scored;
  runner.guarded("score", [&] {
    std::unique_ptr<FollowEvaluator> evaluator =
        hooks.evaluator_factory ? hooks.evaluator_factory(config.scorer) : make_evaluator(config.scorer);
    for (std::size_t g = 0; g < config.generators.size(); ++g) {
      const auto& spec = config.generators[g];
      const auto& gen = generated[g];
      auto key = digest_of({"score", gen.key, evaluator->id(), std::to_string(gen.records.size())});
      auto d = runner.dir("score", key, spec.name);
      bool reused = runner.done(d);
      EvalRun run;
      if (reused) {
        run = load_eval_run(d / "verdicts.evalrun.jsonl");
      } else {
        run = score_generations(gen.records, eval_set, *evaluator, spec.name, condition);
        fs::create_directories(d);
        save_eval_run(d / "verdicts.evalrun.jsonl", run);
        runner.finish("score", key, d, json{{"scorer_id", run.scorer_id}});
      }
      runner.note("score", key, reused, spec.name + " with " + run.scorer_id);
      scored.emplace_back(key, std::move(run));
    }
  });
  if (runner.stop_after("score")) return result;

  // metrics
  const fs::path runs_dir = config.output_dir / "runs";
  runner.guarded("metrics", [&] {
    auto embedder = hooks.embedder_factory ? hooks.embedder_factory(config.embedder) : make_embedder(config.embedder);
    fs::create_directories(runs_dir);
    for (std::size_t g = 0; g < scored.size(); ++g) {
      auto& [score_key, run] = scored[g];
      const auto& records = generated[g].records;
      attach_metrics(run, records, eval_set, *embedder);
      run.manifest_hash = split_digest;
      run.split_seed = manifest.seed;
      run.prompt_version = prompt_ver;
      run.config_hash = cfg_hash;
      run.created_at = utc_timestamp();
      save_eval_run(runs_dir / eval_run_filename(run.generator_name, condition), run);
      runner.note("metrics", score_key, false,
                  run.generator_name + ": IFSM " + format_fixed(run.ifsm, 3) + " over " +
                      std::to_string(run.scored_count()) + " scored");
      result.runs.push_back(run);
    }
  });
  if (runner.stop_after("metrics")) return result;

  // report
  runner.guarded("report", [&] {
    auto all_runs = load_runs(runs_dir);
    write_text_atomic(config.output_dir / "report.md", render_markdown_report(all_runs));
    write_text_atomic(config.output_dir / "ifsm.csv", render_ifsm_csv(all_runs));
    write_text_atomic(config.output_dir / "length.csv", render_length_csv(all_runs));
    result.report_path = config.output_dir / "report.md";

    json stages = json::array();
    for (const auto& s : result.stages) stages.push_back(json{{"stage", s.stage}, {"key", s.key}, {"reused", s.reused}});
    json runs = json::array();
    for (const auto& r : result.runs)
      runs.push_back(json{{"generator", r.generator_name},
                          {"file", (fs::path("runs") / eval_run_filename(r.generator_name, condition)).string()},
                          {"ifsm", r.ifsm},
                          {"scorer_id", r.scorer_id}});
    result.manifest_path = config.output_dir / "run_manifest.json";
    write_json_file(result.manifest_path, json{{"config", to_json(config)},
                                               {"config_hash", cfg_hash},
                                               {"dataset_hash", dataset_digest},
                                               {"manifest_hash", split_digest},
                                               {"split_seed", manifest.seed},
                                               {"prompt_version", prompt_ver},
                                               {"length_condition", condition},
                                               {"generation_failures", result.generation_failures},
                                               {"stages", stages},
                                               {"runs", runs}});
    runner.note("report", cfg_hash, false, result.report_path.string());
  });
  return result;
}

}  // namespace endeval
