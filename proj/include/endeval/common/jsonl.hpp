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
#include <string>
#include <vector>

#include <json.hpp>

namespace endeval {

using json = nlohmann::json;

// One parsed line plus its 0-based record index (blank lines are skipped but
// still advance the line counter used in messages).
struct JsonlRecord {
  std::size_t index;
  std::size_t line;
  json value;
};

// Throws LoadError naming the line on malformed JSON.
std::vector<JsonlRecord> read_jsonl(const std::filesystem::path& path);

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows);

json read_json_file(const std::filesystem::path& path);

// Writes via a sibling temp file and rename so readers never see a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);
void write_json_file(const std::filesystem::path& path, const json& value);

std::string read_text_file(const std::filesystem::path& path);

// Canonical serialization used wherever a value is hashed: sorted keys
// (nlohmann's object_t is an ordered std::map) and no whitespace.
std::string canonical_dump(const json& value);

}  // namespace endeval
