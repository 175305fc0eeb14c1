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

#include "endeval/metrics/length.hpp"

#include "endeval/common/error.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

double length_stats(const std::vector<GenerationRecord>& records) {
  if (records.empty()) throw DomainError("length statistics need at least one record");
  std::size_t words = 0;
  for (const auto& r : records) words += text::word_count(r.raw_output);
  return static_cast<double>(words) / static_cast<double>(records.size());
}

std::vector<LengthRow> length_stats_by_generator(const std::vector<GenerationRecord>& records,
                                                 const std::string& condition) {
  if (records.empty()) throw DomainError("length statistics need at least one record");
  std::vector<LengthRow> rows;
  std::map<std::string, std::size_t> at;
  std::vector<std::size_t> words;
  for (const auto& r : records) {
    auto [it, fresh] = at.emplace(r.generator_name, rows.size());
    if (fresh) {
      rows.push_back({r.generator_name, condition, 0, 0});
      words.push_back(0);
    }
    ++rows[it->second].n;
    words[it->second] += text::word_count(r.raw_output);
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i].mean_words = static_cast<double>(words[i]) / static_cast<double>(rows[i].n);
  return rows;
}

}  // namespace endeval
