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

#include "endeval/human_eval/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "endeval/common/error.hpp"

namespace endeval {

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw DomainError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 2) throw DomainError("pearson: need at least two pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::array<double, 3> scores_of(const Rating& r) {
  return {double(r.fluency), double(r.coherence), double(r.instruction_following)};
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const AgreementReport& r) {
  json strata = json::array();
  for (std::size_t p = 0; p < 3; ++p)
    strata.push_back(json{{"perspective", kPerspectives[p]},
                          {"follow", opt(r.follow_means[p])},
                          {"not_follow", opt(r.not_follow_means[p])},
                          {"delta", opt(r.delta[p])},
                          {"pearson", opt(r.pearson[p])}});
  return json{{"annotators", r.annotators},
              {"follow_tasks", r.follow_tasks},
              {"not_follow_tasks", r.not_follow_tasks},
              {"partial", r.partial},
              {"perspectives", strata}};
}

AgreementReport build_agreement_report(const std::vector<Rating>& ratings, const std::vector<AnnotationTask>& tasks,
                                       const AgreementOptions& options) {
  std::map<std::string, const AnnotationTask*> task_by_id;
  for (const auto& t : tasks) task_by_id.emplace(t.task_id, &t);

  std::vector<std::string> annotators = options.annotators;
  if (annotators.empty()) {
    std::set<std::string> seen;
    for (const auto& r : ratings)
      if (task_by_id.count(r.task_id)) seen.insert(r.annotator_id);
    annotators.assign(seen.begin(), seen.end());
  }
  std::sort(annotators.begin(), annotators.end());
  annotators.erase(std::unique(annotators.begin(), annotators.end()), annotators.end());
  if (annotators.empty()) throw DomainError("no ratings for the given tasks");
  const std::set<std::string> selected(annotators.begin(), annotators.end());

  // task -> annotator -> scores
  std::map<std::string, std::map<std::string, std::array<double, 3>>> grid;
  for (const auto& r : ratings)
    if (task_by_id.count(r.task_id) && selected.count(r.annotator_id)) grid[r.task_id][r.annotator_id] = scores_of(r);

  if (!options.partial) {
    std::size_t missing = 0;
    std::string example;
    for (const auto& t : tasks)
      for (const auto& a : annotators)
        if (!grid[t.task_id].count(a)) {
          if (example.empty()) example = t.task_id + "/" + a;
          ++missing;
        }
    if (missing)
      throw ValidationError(std::to_string(missing) + " (task, annotator) ratings missing, e.g. " + example +
                            "; use partial mode to aggregate anyway");
  }

  AgreementReport report;
  report.annotators = annotators;
  report.partial = options.partial;
  std::array<double, 3> fsum{}, nsum{};
  for (const auto& t : tasks) {
    const auto& by_annotator = grid[t.task_id];
    if (by_annotator.empty()) continue;
    std::array<double, 3> mean{};
    for (const auto& [a, s] : by_annotator)
      for (std::size_t p = 0; p < 3; ++p) mean[p] += s[p];
    for (auto& m : mean) m /= static_cast<double>(by_annotator.size());
    bool follow = t.hidden_strata == Strata::kFollow;
    (follow ? report.follow_tasks : report.not_follow_tasks)++;
    for (std::size_t p = 0; p < 3; ++p) (follow ? fsum : nsum)[p] += mean[p];
  }
  for (std::size_t p = 0; p < 3; ++p) {
    if (report.follow_tasks) report.follow_means[p] = fsum[p] / double(report.follow_tasks);
    if (report.not_follow_tasks) report.not_follow_means[p] = nsum[p] / double(report.not_follow_tasks);
    if (report.follow_means[p] && report.not_follow_means[p])
      report.delta[p] = *report.follow_means[p] - *report.not_follow_means[p];
  }

  for (std::size_t p = 0; p < 3; ++p) {
    double total = 0;
    std::size_t defined = 0;
    for (std::size_t i = 0; i < annotators.size(); ++i)
      for (std::size_t j = i + 1; j < annotators.size(); ++j) {
        std::vector<double> x, y;
        for (const auto& t : tasks) {
          const auto& row = grid[t.task_id];
          auto a = row.find(annotators[i]), b = row.find(annotators[j]);
          if (a == row.end() || b == row.end()) continue;
          x.push_back(a->second[p]);
          y.push_back(b->second[p]);
        }
        if (x.size() < 2) continue;
        if (auto r = endeval::pearson(x, y)) {
          total += *r;
          ++defined;
        }
      }
    if (defined) report.pearson[p] = total / double(defined);
  }
  return report;
}

}  // namespace endeval
