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

#include "endeval/metrics/substitution.hpp"

#include "endeval/common/error.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

SubstitutedQuery substitute_ending(const StoryInstance& instance, const std::string& generated,
                                   const std::string& generator_name) {
  if (text::is_blank(generated))
    throw ValidationError("cannot substitute a blank ending into '" + instance.id + "'");
  SubstitutedQuery q;
  q.base = McQuery::from_instance(instance);
  q.base.options.at(static_cast<std::size_t>(instance.gold_label)) = generated;
  q.gold_label = instance.gold_label;
  q.instance_id = instance.id;
  q.generator_name = generator_name;
  return q;
}

}  // namespace endeval
