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

#include "endeval/human_eval/tasks.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "endeval/common/error.hpp"
#include "endeval/common/rng.hpp"

namespace endeval {

std::string to_string(Strata s) { return s == Strata::kFollow ? "Follow" : "NotFollow"; }

Strata parse_strata(const std::string& s) {
  if (s == "Follow") return Strata::kFollow;
  if (s == "NotFollow") return Strata::kNotFollow;
  throw LoadError("unknown strata '" + s + "'");
}

json to_json(const AnnotationTask& t) {
  return json{{"task_id", t.task_id},         {"instance_id", t.instance_id}, {"generator_name", t.generator_name},
              {"context", t.context},         {"instruction", t.instruction}, {"ending", t.ending},
              {"hidden_strata", to_string(t.hidden_strata)}};
}

AnnotationTask task_from_json(const json& j) {
  try {
    AnnotationTask t{j.at("task_id").get<std::string>(),     j.at("instance_id").get<std::string>(),
                     j.at("generator_name").get<std::string>(), j.at("context").get<std::string>(),
                     j.at("instruction").get<std::string>(),  j.at("ending").get<std::string>(),
                     parse_strata(j.at("hidden_strata").get<std::string>())};
    if (t.context.empty() || t.instruction.empty() || t.ending.empty())
      throw ValidationError("task '" + t.task_id + "' has empty text");
    return t;
  } catch (const json::exception& e) {
    throw LoadError(std::string("annotation task: ") + e.what());
  }
}

json public_view(const AnnotationTask& t) {
  return json{{"task_id", t.task_id}, {"context", t.context}, {"instruction", t.instruction}, {"ending", t.ending}};
}

void save_tasks(const std::filesystem::path& path, const std::vector<AnnotationTask>& tasks) {
  json arr = json::array();
  for (const auto& t : tasks) arr.push_back(to_json(t));
  write_json_file(path, json{{"tasks", arr}});
}

std::vector<AnnotationTask> load_tasks(const std::filesystem::path& path) {
  auto doc = read_json_file(path);
  if (!doc.contains("tasks") || !doc.at("tasks").is_array()) throw LoadError(path.string() + ": no 'tasks' list");
  std::vector<AnnotationTask> out;
  for (const auto& t : doc.at("tasks")) out.push_back(task_from_json(t));
  return out;
}

std::vector<AnnotationTask> sample_tasks(const std::vector<EvalRun>& runs, const std::vector<StoryInstance>& instances,
                                         const SamplingOptions& options) {
  std::unordered_map<std::string, const StoryInstance*> by_id;
  for (const auto& s : instances) by_id.emplace(s.id, &s);

  struct Candidate {
    const EvalRun* run;
    const VerdictRow* verdict;
  };
  std::vector<Candidate> follow, not_follow;
  for (const auto& run : runs) {
    if (!options.models.empty() &&
        std::find(options.models.begin(), options.models.end(), run.generator_name) == options.models.end())
      continue;
    for (const auto& v : run.verdicts) {
      if (v.abstained) continue;
      (v.follows ? follow : not_follow).push_back({&run, &v});
    }
  }
  auto shortfall = [](const char* name, std::size_t have, std::size_t want) {
    return SamplingError(std::string(name) + " stratum has " + std::to_string(have) + " candidates but " +
                         std::to_string(want) + " were requested (short by " + std::to_string(want - have) + ")");
  };
  if (follow.size() < options.n_follow) throw shortfall("Follow", follow.size(), options.n_follow);
  if (not_follow.size() < options.n_not_follow) throw shortfall("NotFollow", not_follow.size(), options.n_not_follow);

  DeterministicRng rng(options.seed);
  rng.shuffle(follow);
  rng.shuffle(not_follow);
  std::vector<std::pair<Candidate, Strata>> picked;
  for (std::size_t i = 0; i < options.n_follow; ++i) picked.emplace_back(follow[i], Strata::kFollow);
  for (std::size_t i = 0; i < options.n_not_follow; ++i) picked.emplace_back(not_follow[i], Strata::kNotFollow);
  rng.shuffle(picked);

  std::vector<AnnotationTask> tasks;
  tasks.reserve(picked.size());
  for (std::size_t i = 0; i < picked.size(); ++i) {
    const auto& [c, strata] = picked[i];
    auto it = by_id.find(c.verdict->instance_id);
    if (it == by_id.end()) throw NotFoundError("instance '" + c.verdict->instance_id + "' not in dataset");
    char id[24];
    std::snprintf(id, sizeof id, "t%03zu", i + 1);
    tasks.push_back(AnnotationTask{id, c.verdict->instance_id, c.run->generator_name, it->second->context_text(),
                                   it->second->question, c.verdict->ending, strata});
  }
  return tasks;
}

}  // namespace endeval
