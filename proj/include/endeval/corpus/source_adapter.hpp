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
#include <optional>
#include <string>
#include <vector>

#include "endeval/common/jsonl.hpp"
#include "endeval/corpus/story.hpp"

namespace endeval {

// Maps one upstream record layout onto StoryInstance. Adapters are declared
// in data/source_formats.json; see that file for the accepted keys.
struct SourceAdapter {
  enum class Container { kJsonl, kJsonArray, kCsv };
  enum class LabelEncoding { kIndex0, kIndex1, kLetter };

  std::string tag;
  Container container = Container::kJsonl;

  std::vector<std::string> id_fields;  // joined with id_separator
  std::string id_separator = "-";

  // Exactly one of the two forms is set per multi-valued field.
  std::optional<std::string> context_list;
  std::vector<std::string> context_fields;
  std::string question_field;
  std::optional<std::string> endings_list;
  std::vector<std::string> endings_fields;

  std::string label_field;
  LabelEncoding label_encoding = LabelEncoding::kIndex0;

  // Maps one flat record (JSON object; CSV rows arrive as string-valued
  // objects) to a validated instance.
  StoryInstance map_record(const json& record, std::size_t index) const;
};

SourceAdapter parse_adapter(const std::string& tag, const json& spec);

class AdapterTable {
 public:
  static AdapterTable from_json(const json& table);
  // Resolution order: explicit path, $ENDEVAL_ADAPTER_TABLE, the table
  // shipped in data/.
  static AdapterTable load(const std::optional<std::filesystem::path>& path = std::nullopt);

  const SourceAdapter& get(const std::string& tag) const;
  std::vector<std::string> tags() const;

 private:
  std::map<std::string, SourceAdapter> adapters_;
};

// Minimal RFC 4180 reader: header row, quoted fields, doubled quotes,
// embedded newlines inside quotes.
std::vector<std::map<std::string, std::string>> read_csv(const std::string& content);

}  // namespace endeval
