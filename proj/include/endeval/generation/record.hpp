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

#include "endeval/common/jsonl.hpp"

namespace endeval {

// One generated ending with its provenance. `raw_output` is kept verbatim so
// length statistics can measure model verbosity; `ending` is the
// postprocessed first sentence that gets scored.
struct GenerationRecord {
  std::string instance_id;
  std::string generator_name;
  std::string prompt_hash;
  std::string prompt;
  std::string raw_output;
  std::string ending;
  std::string created_at;  // ISO-8601 UTC
  int attempt = 1;

  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

json to_json(const GenerationRecord& r);
GenerationRecord record_from_json(const json& j);

std::string utc_timestamp();

}  // namespace endeval
