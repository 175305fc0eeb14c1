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

#include "endeval/human_eval/ratings.hpp"

#include <fcntl.h>
#include <unistd.h>

#include "endeval/common/error.hpp"
#include "endeval/generation/record.hpp"

namespace endeval {

json to_json(const Rating& r) {
  return json{{"task_id", r.task_id},
              {"annotator_id", r.annotator_id},
              {"fluency", r.fluency},
              {"coherence", r.coherence},
              {"instruction_following", r.instruction_following},
              {"submitted_at", r.submitted_at}};
}

namespace {

std::string require_string(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_string())
    throw ValidationError(std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

int require_score(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw ValidationError(std::string("'") + key + "' must be an integer 1-5");
  auto v = j.at(key).get<long long>();
  if (v < 1 || v > 5) throw ValidationError(std::string("'") + key + "' must be in 1-5, got " + std::to_string(v));
  return static_cast<int>(v);
}

}  // namespace

Rating rating_from_json(const json& j) {
  Rating r;
  r.task_id = require_string(j, "task_id");
  r.annotator_id = require_string(j, "annotator_id");
  r.fluency = require_score(j, "fluency");
  r.coherence = require_score(j, "coherence");
  r.instruction_following = require_score(j, "instruction_following");
  if (j.contains("submitted_at") && j.at("submitted_at").is_string()) r.submitted_at = j.at("submitted_at");
  validate(r);
  return r;
}

void validate(const Rating& r) {
  if (r.task_id.empty()) throw ValidationError("task_id is empty");
  if (r.annotator_id.empty()) throw ValidationError("annotator_id is empty");
  for (auto [name, v] : {std::pair{"fluency", r.fluency}, std::pair{"coherence", r.coherence},
                         std::pair{"instruction_following", r.instruction_following}})
    if (v < 1 || v > 5) throw ValidationError(std::string(name) + " must be in 1-5, got " + std::to_string(v));
}

std::vector<Rating> load_ratings(const std::filesystem::path& path) {
  std::map<std::pair<std::string, std::string>, Rating> last;
  for (const auto& rec : read_jsonl(path)) {
    try {
      auto r = rating_from_json(rec.value);
      last[{r.task_id, r.annotator_id}] = r;
    } catch (const ValidationError& e) {
      throw LoadError(path.string() + ":" + std::to_string(rec.line) + ": " + e.what());
    }
  }
  std::vector<Rating> out;
  for (auto& [k, r] : last) out.push_back(std::move(r));
  return out;
}

RatingStore::RatingStore(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_))
    for (auto& r : load_ratings(path_)) ratings_[{r.task_id, r.annotator_id}] = std::move(r);
}

Rating RatingStore::upsert(Rating rating) {
  validate(rating);
  if (rating.submitted_at.empty()) rating.submitted_at = utc_timestamp();
  std::lock_guard lock(mu_);
  if (!path_.empty()) {
    std::string line = to_json(rating).dump() + "\n";
    int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) throw Error("cannot open rating store " + path_.string());
    auto written = ::write(fd, line.data(), line.size());
    int synced = ::fsync(fd);
    ::close(fd);
    if (written != static_cast<ssize_t>(line.size()) || synced != 0)
      throw Error("short write to rating store " + path_.string());
  }
  ratings_[{rating.task_id, rating.annotator_id}] = rating;
  return rating;
}

bool RatingStore::has(const std::string& task_id, const std::string& annotator_id) const {
  std::lock_guard lock(mu_);
  return ratings_.count({task_id, annotator_id}) > 0;
}

std::size_t RatingStore::count_for(const std::string& annotator_id) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [k, r] : ratings_) n += k.second == annotator_id;
  return n;
}

std::vector<Rating> RatingStore::snapshot() const {
  std::lock_guard lock(mu_);
  std::vector<Rating> out;
  out.reserve(ratings_.size());
  for (const auto& [k, r] : ratings_) out.push_back(r);
  return out;
}

std::size_t RatingStore::size() const {
  std::lock_guard lock(mu_);
  return ratings_.size();
}

}  // namespace endeval
