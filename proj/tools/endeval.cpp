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

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "endeval/common/error.hpp"
#include "endeval/corpus/dataset_io.hpp"
#include "endeval/corpus/prompt.hpp"
#include "endeval/corpus/source_adapter.hpp"
#include "endeval/corpus/splits.hpp"
#include "endeval/generation/cache.hpp"
#include "endeval/generation/generator.hpp"
#include "endeval/human_eval/agreement.hpp"
#include "endeval/human_eval/service.hpp"
#include "endeval/metrics/report.hpp"
#include "endeval/pipeline/pipeline.hpp"
#include "endeval/scorers/training.hpp"

namespace fs = std::filesystem;
using namespace endeval;

namespace {

std::vector<StoryInstance> load_any(const std::string& path, const std::string& format,
                                    const std::string& adapter_table) {
  if (adapter_table.empty()) return load_dataset(path, format);
  auto table = AdapterTable::load(fs::path(adapter_table));
  return load_dataset(path, table.get(format));
}

std::vector<StoryInstance> split_subset(const std::vector<StoryInstance>& all, const std::string& manifest_path,
                                        const std::string& which) {
  if (manifest_path.empty() || which == "all") return all;
  auto m = load_manifest(manifest_path);
  if (which == "gen_eval") return select(all, m.gen_eval);
  if (which == "mrc_test") return select(all, m.mrc_test);
  if (which == "mrc_valid") return select(all, m.mrc_valid);
  if (which == "mrc_train") return select(all, m.mrc_train);
  throw ConfigError("unknown split '" + which + "'");
}

std::vector<GenerationRecord> read_records(const std::string& path) {
  std::vector<GenerationRecord> out;
  for (const auto& r : read_jsonl(path)) out.push_back(record_from_json(r.value));
  return out;
}

AnnotationService* g_service = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instruction-following evaluation for story-ending generation"};
  app.require_subcommand(1);

  // convert
  std::string in_path, format = "canonical", adapter_table, out_path;
  auto* convert = app.add_subcommand("convert", "Normalize a source dump to canonical JSONL");
  convert->add_option("--input", in_path, "Source file")->required()->check(CLI::ExistingFile);
  convert->add_option("--format", format, "Adapter name");
  convert->add_option("--adapter-table", adapter_table, "Adapter table JSON")->check(CLI::ExistingFile);
  convert->add_option("--output", out_path, "Canonical JSONL")->required();

  // split
  std::string dataset, manifest_path;
  std::uint64_t seed = 0;
  std::vector<std::size_t> sizes;
  auto* split = app.add_subcommand("split", "Write a context-grouped split manifest");
  split->add_option("--dataset", dataset, "Canonical JSONL")->required()->check(CLI::ExistingFile);
  split->add_option("--seed", seed, "Shuffle seed");
  split->add_option("--sizes", sizes, "mrc_train mrc_valid mrc_test gen_eval")->expected(4)->delimiter(',');
  split->add_option("--output", out_path, "Manifest JSON")->required();

  // generate
  std::string gen_spec_path, length = "none", cache_path, which = "gen_eval", policy = "fail-fast";
  auto* generate = app.add_subcommand("generate", "Generate endings with one generator");
  generate->add_option("--dataset", dataset, "Canonical JSONL")->required()->check(CLI::ExistingFile);
  generate->add_option("--manifest", manifest_path, "Split manifest")->check(CLI::ExistingFile);
  generate->add_option("--split", which, "gen_eval | mrc_test | mrc_valid | mrc_train | all");
  generate->add_option("--generator", gen_spec_path, "Generator spec JSON")->required()->check(CLI::ExistingFile);
  generate->add_option("--length", length, "Word limit or 'none'");
  generate->add_option("--cache", cache_path, "Generation cache JSONL");
  generate->add_option("--failure-policy", policy, "fail-fast | collect")->check(CLI::IsMember({"fail-fast", "collect"}));
  generate->add_option("--output", out_path, "Generation records JSONL")->required();

  // train-mrc
  std::string training_config_path;
  auto* train = app.add_subcommand("train-mrc", "Train the multiple-choice reader on the MRC splits");
  train->add_option("--dataset", dataset, "Canonical JSONL")->required()->check(CLI::ExistingFile);
  train->add_option("--manifest", manifest_path, "Split manifest")->required()->check(CLI::ExistingFile);
  train->add_option("--config", training_config_path, "Training config JSON")->check(CLI::ExistingFile);
  train->add_option("--output", out_path, "Checkpoint directory")->required();

  // score
  std::string generations_path, scorer = "mrc", checkpoint, stub_mode = "always-gold", nsp_endpoint, judge_spec_path;
  std::uint64_t stub_seed = 0;
  double nsp_threshold = 0.5;
  std::string embedder_backend = "hashing", embedder_model, embedder_location, generator_name;
  auto* score = app.add_subcommand("score", "Score generated endings and compute run metrics");
  score->add_option("--dataset", dataset, "Canonical JSONL")->required()->check(CLI::ExistingFile);
  score->add_option("--manifest", manifest_path, "Split manifest (recorded for provenance)")->check(CLI::ExistingFile);
  score->add_option("--generations", generations_path, "Generation records JSONL")->required()->check(CLI::ExistingFile);
  score->add_option("--generator-name", generator_name, "Defaults to the records' generator");
  score->add_option("--length", length, "Length condition label");
  score->add_option("--scorer", scorer, "mrc | nsp | judge | stub")->check(CLI::IsMember({"mrc", "nsp", "judge", "stub"}));
  score->add_option("--checkpoint", checkpoint, "MRC checkpoint directory")->check(CLI::ExistingDirectory);
  score->add_option("--stub-mode", stub_mode, "always-gold | never-gold | random");
  score->add_option("--stub-seed", stub_seed, "Seed for the random stub");
  score->add_option("--nsp-endpoint", nsp_endpoint, "NSP service URL");
  score->add_option("--nsp-threshold", nsp_threshold, "Follow threshold");
  score->add_option("--judge", judge_spec_path, "Judge generator spec JSON")->check(CLI::ExistingFile);
  score->add_option("--embedder", embedder_backend, "hashing | table | http");
  score->add_option("--embedder-model", embedder_model, "Embedding model id");
  score->add_option("--embedder-location", embedder_location, "Table file or endpoint URL");
  score->add_option("--output", out_path, "EvalRun JSONL")->required();

  // report
  std::string runs_dir, csv_dir;
  auto* report = app.add_subcommand("report", "Render a report joining every run under a directory");
  report->add_option("--runs", runs_dir, "Directory of *.evalrun.jsonl")->required()->check(CLI::ExistingDirectory);
  report->add_option("--output", out_path, "Markdown file (stdout if omitted)");
  report->add_option("--csv-dir", csv_dir, "Also write ifsm.csv and length.csv here");

  // sample
  std::vector<std::string> run_files, models;
  std::size_t n_follow = 25, n_not_follow = 20;
  auto* sample = app.add_subcommand("sample", "Draw Follow / NotFollow annotation tasks");
  sample->add_option("--runs", run_files, "EvalRun files")->required()->check(CLI::ExistingFile);
  sample->add_option("--dataset", dataset, "Canonical JSONL")->required()->check(CLI::ExistingFile);
  sample->add_option("--n-follow", n_follow, "Follow tasks");
  sample->add_option("--n-not-follow", n_not_follow, "NotFollow tasks");
  sample->add_option("--seed", seed, "Sampling seed");
  sample->add_option("--models", models, "Generators to draw from");
  sample->add_option("--output", out_path, "Tasks JSON")->required();

  // serve
  std::string tasks_path, ratings_path, host = "127.0.0.1", static_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the annotation API");
  serve->add_option("--tasks", tasks_path, "Tasks JSON")->required()->check(CLI::ExistingFile);
  serve->add_option("--ratings", ratings_path, "Rating store JSONL")->required();
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--static", static_dir, "Annotation UI build directory")->check(CLI::ExistingDirectory);

  // agreement
  std::vector<std::string> annotators;
  bool partial = false, as_json = false;
  auto* agreement = app.add_subcommand("agreement", "Strata means, gap and annotator correlation");
  agreement->add_option("--tasks", tasks_path, "Tasks JSON")->required()->check(CLI::ExistingFile);
  agreement->add_option("--ratings", ratings_path, "Ratings JSONL")->required()->check(CLI::ExistingFile);
  agreement->add_option("--annotators", annotators, "Annotator ids (default: all)");
  agreement->add_flag("--partial", partial, "Allow incomplete rating sets");
  agreement->add_flag("--json", as_json, "Emit JSON instead of markdown");

  // run / validate
  std::string config_path, stop_after;
  auto* run = app.add_subcommand("run", "Run the whole pipeline from a config file");
  run->add_option("config", config_path, "Run config JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--stop-after", stop_after, "Stop after this stage");
  auto* validate_cmd = app.add_subcommand("validate", "Check a run config and print it resolved");
  validate_cmd->add_option("config", config_path, "Run config JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*convert) {
      auto instances = load_any(in_path, format, adapter_table);
      save_dataset(out_path, instances);
      std::cout << "wrote " << instances.size() << " instances, sha256 " << dataset_hash(instances) << "\n";
    } else if (*split) {
      auto instances = load_dataset(dataset, "canonical");
      std::optional<SplitSizes> sz;
      if (!sizes.empty()) sz = SplitSizes{sizes[0], sizes[1], sizes[2], sizes[3]};
      auto m = make_splits(instances, seed, sz);
      save_manifest(out_path, m);
      std::cout << "mrc_train " << m.mrc_train.size() << ", mrc_valid " << m.mrc_valid.size() << ", mrc_test "
                << m.mrc_test.size() << ", gen_eval " << m.gen_eval.size() << "; manifest sha256 " << manifest_hash(m)
                << "\n";
    } else if (*generate) {
      auto instances = split_subset(load_dataset(dataset, "canonical"), manifest_path, which);
      auto spec = generator_spec_from_json(read_json_file(gen_spec_path));
      auto cache = cache_path.empty() ? std::make_shared<GenerationCache>()
                                      : std::make_shared<GenerationCache>(fs::path(cache_path));
      Generator gen(spec, std::shared_ptr<TextBackend>(make_backend(spec)), cache);
      auto batch = gen.batch_generate(instances, parse_length_condition(length),
                                      policy == "collect" ? FailurePolicy::kCollect : FailurePolicy::kFailFast);
      std::vector<json> rows;
      for (const auto& r : batch.records) rows.push_back(to_json(r));
      write_jsonl(out_path, rows);
      for (const auto& e : batch.errors) std::cerr << "failed " << e.instance_id << ": " << e.message << "\n";
      std::cout << batch.records.size() << " endings, " << batch.errors.size() << " failures, "
                << gen.backend_calls() << " backend calls\n";
      return batch.errors.empty() ? 0 : 3;
    } else if (*train) {
      auto instances = load_dataset(dataset, "canonical");
      auto m = load_manifest(manifest_path);
      TrainingConfig tc;
      if (!training_config_path.empty()) tc = training_config_from_json(read_json_file(training_config_path));
      auto trained = train_mrc(select(instances, m.mrc_train), select(instances, m.mrc_valid),
                               select(instances, m.mrc_test), m, tc, out_path);
      std::cout << to_json(trained.metrics).dump(2) << "\n";
    } else if (*score) {
      auto instances = load_dataset(dataset, "canonical");
      auto records = read_records(generations_path);
      if (records.empty()) throw ValidationError("no generation records in " + generations_path);
      ScorerSpec spec;
      spec.backend = parse_evaluator_kind(scorer);
      spec.checkpoint = checkpoint;
      spec.stub_mode = parse_stub_mode(stub_mode);
      spec.stub_seed = stub_seed;
      spec.nsp_endpoint = nsp_endpoint;
      spec.nsp_threshold = nsp_threshold;
      if (!judge_spec_path.empty()) spec.judge_model = generator_spec_from_json(read_json_file(judge_spec_path));
      auto evaluator = make_evaluator(spec);
      EmbedderSpec es;
      es.backend = embedder_backend;
      es.location = embedder_location;
      if (!embedder_model.empty()) es.model_id = embedder_model;
      auto embedder = make_embedder(es);
      auto name = generator_name.empty() ? records.front().generator_name : generator_name;
      auto condition = length_condition_tag(parse_length_condition(length));
      auto run_out = score_generations(records, instances, *evaluator, name, condition);
      attach_metrics(run_out, records, instances, *embedder);
      run_out.prompt_version = prompt_version(kEndingTemplateId, parse_length_condition(length));
      if (!manifest_path.empty()) {
        auto m = load_manifest(manifest_path);
        run_out.manifest_hash = manifest_hash(m);
        run_out.split_seed = m.seed;
      }
      run_out.created_at = utc_timestamp();
      save_eval_run(out_path, run_out);
      std::cout << name << " [" << condition << "] IFSM " << format_fixed(run_out.ifsm, 3) << " over "
                << run_out.scored_count() << " (" << run_out.abstain_count() << " abstained)";
      if (run_out.dissimilarity) std::cout << ", dissimilarity " << format_fixed(*run_out.dissimilarity, 3);
      std::cout << "\n";
    } else if (*report) {
      auto runs = load_runs(runs_dir);
      if (runs.empty()) throw NotFoundError("no *.evalrun.jsonl under " + runs_dir);
      auto md = render_markdown_report(runs);
      if (out_path.empty())
        std::cout << md;
      else
        write_text_atomic(out_path, md);
      if (!csv_dir.empty()) {
        fs::create_directories(csv_dir);
        write_text_atomic(fs::path(csv_dir) / "ifsm.csv", render_ifsm_csv(runs));
        write_text_atomic(fs::path(csv_dir) / "length.csv", render_length_csv(runs));
      }
    } else if (*sample) {
      std::vector<EvalRun> runs;
      for (const auto& f : run_files) runs.push_back(load_eval_run(f));
      SamplingOptions opts{n_follow, n_not_follow, seed, models};
      auto tasks = sample_tasks(runs, load_dataset(dataset, "canonical"), opts);
      save_tasks(out_path, tasks);
      std::cout << "wrote " << tasks.size() << " tasks\n";
    } else if (*serve) {
      ServiceOptions opts;
      opts.admin_token = admin_token_from_env();
      if (!static_dir.empty()) opts.static_dir = fs::path(static_dir);
      auto store = std::make_shared<RatingStore>(fs::path(ratings_path));
      AnnotationService service(load_tasks(tasks_path), store, opts);
      g_service = &service;
      std::signal(SIGINT, [](int) {
        if (g_service) g_service->stop();
      });
      std::signal(SIGTERM, [](int) {
        if (g_service) g_service->stop();
      });
      std::cout << "serving " << service.tasks().size() << " tasks on http://" << host << ":" << port
                << (opts.admin_token.empty() ? " (export disabled: ENDEVAL_ADMIN_TOKEN unset)" : "") << std::endl;
      if (!service.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
      g_service = nullptr;
    } else if (*agreement) {
      auto rep = build_agreement_report(load_ratings(ratings_path), load_tasks(tasks_path),
                                        AgreementOptions{annotators, partial});
      if (as_json)
        std::cout << to_json(rep).dump(2) << "\n";
      else
        std::cout << render_agreement_markdown(rep);
    } else if (*run) {
      auto cfg = validate_config(config_path);
      PipelineHooks hooks;
      hooks.log = [](const std::string& line) { std::cerr << line << "\n"; };
      if (!stop_after.empty()) hooks.stop_after = stop_after;
      auto result = run_pipeline(cfg, hooks);
      for (const auto& r : result.runs)
        std::cout << r.generator_name << " [" << r.length_condition << "] IFSM " << format_fixed(r.ifsm, 3) << "\n";
      if (!result.report_path.empty()) std::cout << "report: " << result.report_path.string() << "\n";
      return result.generation_failures ? 3 : 0;
    } else if (*validate_cmd) {
      auto cfg = validate_config(config_path);
      std::cout << to_json(cfg).dump(2) << "\nconfig sha256 " << config_hash(cfg) << "\n";
    }
  } catch (const ConfigValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
