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

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "endeval/common/jsonl.hpp"

namespace endeval {

// Scores are integers on a 1-5 scale.
struct Rating {
  std::string task_id;
  std::string annotator_id;
  int fluency = 0;
  int coherence = 0;
  int instruction_following = 0;
  std::string submitted_at;

  friend bool operator==(const Rating&, const Rating&) = default;
};

json to_json(const Rating& r);
// Throws ValidationError for missing fields, non-integer or out-of-range scores.
Rating rating_from_json(const json& j);
void validate(const Rating& r);

// Ratings keyed by (task_id, annotator_id); a later submission replaces the
// earlier one. With a path, every upsert is appended and fsynced before it
// returns, and reopening replays the log (last write wins). Thread-safe.
class RatingStore {
 public:
  RatingStore() = default;
  explicit RatingStore(std::filesystem::path path);

  // Validates, stamps submitted_at when empty, persists, and returns the stored rating.
  Rating upsert(Rating rating);

  bool has(const std::string& task_id, const std::string& annotator_id) const;
  std::size_t count_for(const std::string& annotator_id) const;
  // Sorted by (task_id, annotator_id).
  std::vector<Rating> snapshot() const;
  std::size_t size() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, Rating> ratings_;
};

std::vector<Rating> load_ratings(const std::filesystem::path& path);

}  // namespace endeval
