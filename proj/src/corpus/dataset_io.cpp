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

#include "endeval/corpus/dataset_io.hpp"

#include <unordered_set>

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"

namespace endeval {

std::vector<StoryInstance> load_dataset(const std::filesystem::path& path, const SourceAdapter& adapter) {
  std::vector<json> records;
  switch (adapter.container) {
    case SourceAdapter::Container::kJsonl:
      for (auto& r : read_jsonl(path)) records.push_back(std::move(r.value));
      break;
    case SourceAdapter::Container::kJsonArray: {
      auto content = read_text_file(path);
      if (content.find_first_not_of(" \t\r\n") == std::string::npos) break;
      auto doc = read_json_file(path);
      if (!doc.is_array()) throw LoadError(path.string() + ": expected a JSON array");
      records = doc.get<std::vector<json>>();
      break;
    }
    case SourceAdapter::Container::kCsv:
      for (auto& row : read_csv(read_text_file(path))) records.emplace_back(row);
      break;
  }

  std::vector<StoryInstance> out;
  out.reserve(records.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto s = adapter.map_record(records[i], i);
    if (!seen.insert(s.id).second)
      throw ValidationError("record " + std::to_string(i) + ": duplicate id '" + s.id + "'");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<StoryInstance> load_dataset(const std::filesystem::path& path, const std::string& format) {
  return load_dataset(path, AdapterTable::load().get(format));
}

void save_dataset(const std::filesystem::path& path, const std::vector<StoryInstance>& instances) {
  std::vector<json> rows;
  rows.reserve(instances.size());
  for (const auto& s : instances) rows.push_back(to_json(s));
  write_jsonl(path, rows);
}

std::string dataset_hash(const std::vector<StoryInstance>& instances) {
  std::string buf;
  for (const auto& s : instances) {
    buf += to_json(s).dump();
    buf += '\n';
  }
  return sha256_hex(buf);
}

}  // namespace endeval
