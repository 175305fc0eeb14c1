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

#include <string>

#include "endeval/corpus/story.hpp"
#include "endeval/scorers/mc.hpp"

namespace endeval {

// The instance's query with the gold ending replaced by a generated one.
struct SubstitutedQuery {
  McQuery base;
  int gold_label = 0;
  std::string instance_id;
  std::string generator_name;
};

// Throws ValidationError when `generated` is blank.
SubstitutedQuery substitute_ending(const StoryInstance& instance, const std::string& generated,
                                   const std::string& generator_name = {});

}  // namespace endeval
