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

#include "endeval/metrics/ifsm.hpp"

#include "endeval/common/error.hpp"

namespace endeval {

double compute_ifsm(std::span<const LabelPair> verdicts) {
  if (verdicts.empty()) throw DomainError("IFSM is undefined for an empty verdict list");
  std::size_t hits = 0;
  for (const auto& [predicted, gold] : verdicts) hits += predicted == gold;
  return static_cast<double>(hits) / static_cast<double>(verdicts.size());
}

}  // namespace endeval
