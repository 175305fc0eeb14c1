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

#include <map>
#include <string>
#include <vector>

#include "endeval/generation/record.hpp"

namespace endeval {

// Mean whitespace-token count of raw_output. Throws DomainError when empty.
double length_stats(const std::vector<GenerationRecord>& records);

// Mean per generator for one length condition; `condition` only labels the
// result ("none", "10", "15").
struct LengthRow {
  std::string generator;
  std::string condition;
  double mean_words = 0;
  std::size_t n = 0;
};
std::vector<LengthRow> length_stats_by_generator(const std::vector<GenerationRecord>& records,
                                                 const std::string& condition);

}  // namespace endeval
