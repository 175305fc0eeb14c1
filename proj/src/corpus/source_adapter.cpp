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

#include "endeval/corpus/source_adapter.hpp"

#include <cstdlib>

#include "endeval/common/error.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

namespace {

std::string where_of(std::size_t index) { return "record " + std::to_string(index); }

std::string scalar_text(const json& record, const std::string& name, std::size_t index) {
  auto it = record.find(name);
  if (it == record.end()) throw LoadError(where_of(index) + ": missing field '" + name + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw LoadError(where_of(index) + ": field '" + name + "' is not a string");
}

template <std::size_t N>
std::array<std::string, N> gather(const json& record, const std::optional<std::string>& list,
                                  const std::vector<std::string>& fields, const char* what,
                                  std::size_t index) {
  std::array<std::string, N> out;
  if (list) {
    auto it = record.find(*list);
    if (it == record.end()) throw LoadError(where_of(index) + ": missing field '" + *list + "'");
    if (!it->is_array()) throw LoadError(where_of(index) + ": field '" + *list + "' is not a list");
    if (it->size() != N)
      throw ValidationError(where_of(index) + ": " + what + " has " + std::to_string(it->size()) +
                            " entries, expected " + std::to_string(N));
    for (std::size_t i = 0; i < N; ++i) {
      if (!(*it)[i].is_string())
        throw LoadError(where_of(index) + ": field '" + *list + "[" + std::to_string(i) +
                        "]' is not a string");
      out[i] = (*it)[i].get<std::string>();
    }
    return out;
  }
  if (fields.size() != N)
    throw ValidationError(where_of(index) + ": adapter maps " + std::to_string(fields.size()) +
                          " fields to " + what + ", expected " + std::to_string(N));
  for (std::size_t i = 0; i < N; ++i) out[i] = scalar_text(record, fields[i], index);
  return out;
}

int decode_label(const json& record, const SourceAdapter& a, std::size_t index) {
  auto it = record.find(a.label_field);
  if (it == record.end())
    throw LoadError(where_of(index) + ": missing field '" + a.label_field + "'");
  std::string raw;
  if (it->is_number_integer()) {
    raw = std::to_string(it->get<long long>());
  } else if (it->is_string()) {
    raw = text::trim(it->get<std::string>());
  } else {
    throw LoadError(where_of(index) + ": field '" + a.label_field + "' has unsupported type");
  }
  auto bad = [&] {
    return LoadError(where_of(index) + ": field '" + a.label_field + "' has unparseable label '" +
                     raw + "'");
  };
  if (a.label_encoding == SourceAdapter::LabelEncoding::kLetter) {
    if (raw.size() != 1) throw bad();
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw[0])));
    return c - 'A';
  }
  char* end = nullptr;
  long v = std::strtol(raw.c_str(), &end, 10);
  if (raw.empty() || *end != '\0') throw bad();
  return static_cast<int>(a.label_encoding == SourceAdapter::LabelEncoding::kIndex1 ? v - 1 : v);
}

}  // namespace

StoryInstance SourceAdapter::map_record(const json& record, std::size_t index) const {
  if (!record.is_object()) throw LoadError(where_of(index) + ": not an object");
  StoryInstance s;
  std::vector<std::string> id_parts;
  for (const auto& f : id_fields) id_parts.push_back(scalar_text(record, f, index));
  s.id = text::join(id_parts, id_separator);
  s.context = gather<kContextSentences>(record, context_list, context_fields, "context", index);
  s.question = scalar_text(record, question_field, index);
  s.endings = gather<kEndingCount>(record, endings_list, endings_fields, "endings", index);
  s.gold_label = decode_label(record, *this, index);
  try {
    validate(s);
  } catch (const ValidationError& e) {
    throw ValidationError(where_of(index) + ": " + e.what());
  }
  return s;
}

SourceAdapter parse_adapter(const std::string& tag, const json& spec) {
  auto fail = [&](const std::string& msg) { return ConfigError("adapter '" + tag + "': " + msg); };
  if (!spec.is_object()) throw fail("not an object");
  SourceAdapter a;
  a.tag = tag;
  auto container = spec.value("container", "jsonl");
  if (container == "jsonl") a.container = SourceAdapter::Container::kJsonl;
  else if (container == "json-array") a.container = SourceAdapter::Container::kJsonArray;
  else if (container == "csv") a.container = SourceAdapter::Container::kCsv;
  else throw fail("unknown container '" + container + "'");

  const auto& id = spec.at("id");
  if (id.is_string()) {
    a.id_fields = {id.get<std::string>()};
  } else {
    a.id_fields = id.at("join").get<std::vector<std::string>>();
    a.id_separator = id.value("separator", "-");
  }
  auto multi = [&](const char* key, std::optional<std::string>& list,
                   std::vector<std::string>& fields) {
    const auto& m = spec.at(key);
    if (m.contains("list")) list = m.at("list").get<std::string>();
    else if (m.contains("fields")) fields = m.at("fields").get<std::vector<std::string>>();
    else throw fail(std::string(key) + " needs 'list' or 'fields'");
  };
  multi("context", a.context_list, a.context_fields);
  a.question_field = spec.at("question").get<std::string>();
  multi("endings", a.endings_list, a.endings_fields);
  const auto& label = spec.at("label");
  a.label_field = label.at("field").get<std::string>();
  auto enc = label.value("encoding", "index0");
  if (enc == "index0") a.label_encoding = SourceAdapter::LabelEncoding::kIndex0;
  else if (enc == "index1") a.label_encoding = SourceAdapter::LabelEncoding::kIndex1;
  else if (enc == "letter") a.label_encoding = SourceAdapter::LabelEncoding::kLetter;
  else throw fail("unknown label encoding '" + enc + "'");
  return a;
}

AdapterTable AdapterTable::from_json(const json& table) {
  if (!table.is_object()) throw ConfigError("adapter table must be an object");
  AdapterTable t;
  for (const auto& [tag, spec] : table.items()) {
    try {
      t.adapters_.emplace(tag, parse_adapter(tag, spec));
    } catch (const json::exception& e) {
      throw ConfigError("adapter '" + tag + "': " + e.what());
    }
  }
  return t;
}

AdapterTable AdapterTable::load(const std::optional<std::filesystem::path>& path) {
  std::filesystem::path p;
  if (path) p = *path;
  else if (const char* env = std::getenv("ENDEVAL_ADAPTER_TABLE")) p = env;
  else p = std::filesystem::path(ENDEVAL_DATA_DIR) / "source_formats.json";
  return from_json(read_json_file(p));
}

const SourceAdapter& AdapterTable::get(const std::string& tag) const {
  auto it = adapters_.find(tag);
  if (it == adapters_.end()) {
    throw ConfigError("unknown source format '" + tag + "' (known: " + text::join(tags(), ", ") + ")");
  }
  return it->second;
}

std::vector<std::string> AdapterTable::tags() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : adapters_) out.push_back(k);
  return out;
}

std::vector<std::map<std::string, std::string>> read_csv(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
      if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      any = false;
    } else {
      cell.push_back(c);
      any = true;
    }
  }
  if (quoted) throw LoadError("csv: unterminated quoted field");
  if (any || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  std::vector<std::map<std::string, std::string>> out;
  if (rows.empty()) return out;
  const auto& header = rows.front();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size())
      throw LoadError("csv: record " + std::to_string(r - 1) + " has " +
                      std::to_string(rows[r].size()) + " fields, header has " +
                      std::to_string(header.size()));
    std::map<std::string, std::string> m;
    for (std::size_t c = 0; c < header.size(); ++c) m[header[c]] = rows[r][c];
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace endeval
