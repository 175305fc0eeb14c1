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

#include "endeval/corpus/story.hpp"

#include "endeval/common/error.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

std::string StoryInstance::context_text() const {
  return text::join(std::vector<std::string>(context.begin(), context.end()), " ");
}

void validate(const StoryInstance& s) {
  auto where = "instance '" + s.id + "': ";
  if (text::is_blank(s.id)) throw ValidationError(where + "empty id");
  for (std::size_t i = 0; i < s.context.size(); ++i)
    if (text::is_blank(s.context[i]))
      throw ValidationError(where + "context[" + std::to_string(i) + "] is empty");
  if (text::is_blank(s.question)) throw ValidationError(where + "empty question");
  for (std::size_t i = 0; i < s.endings.size(); ++i)
    if (text::is_blank(s.endings[i]))
      throw ValidationError(where + "endings[" + std::to_string(i) + "] is empty");
  if (s.gold_label < 0 || s.gold_label > 3)
    throw ValidationError(where + "gold_label " + std::to_string(s.gold_label) + " outside 0..3");
}

json to_json(const StoryInstance& s) {
  return json{{"id", s.id},
              {"context", s.context},
              {"question", s.question},
              {"endings", s.endings},
              {"gold_label", s.gold_label}};
}

namespace {

const json& field(const json& j, const char* name, const std::string& where) {
  auto it = j.find(name);
  if (it == j.end()) throw LoadError(where + ": missing field '" + name + "'");
  return *it;
}

std::string string_field(const json& j, const char* name, const std::string& where) {
  const auto& v = field(j, name, where);
  if (!v.is_string()) throw LoadError(where + ": field '" + name + "' is not a string");
  return v.get<std::string>();
}

template <std::size_t N>
std::array<std::string, N> list_field(const json& j, const char* name, const std::string& where) {
  const auto& v = field(j, name, where);
  if (!v.is_array()) throw LoadError(where + ": field '" + name + "' is not a list");
  if (v.size() != N)
    throw ValidationError(where + ": field '" + name + "' has " + std::to_string(v.size()) +
                          " entries, expected " + std::to_string(N));
  std::array<std::string, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_string())
      throw LoadError(where + ": field '" + name + "[" + std::to_string(i) + "]' is not a string");
    out[i] = v[i].get<std::string>();
  }
  return out;
}

}  // namespace

StoryInstance story_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw LoadError(where + ": not an object");
  StoryInstance s;
  s.id = string_field(j, "id", where);
  s.context = list_field<kContextSentences>(j, "context", where);
  s.question = string_field(j, "question", where);
  s.endings = list_field<kEndingCount>(j, "endings", where);
  const auto& label = field(j, "gold_label", where);
  if (!label.is_number_integer()) throw LoadError(where + ": field 'gold_label' is not an integer");
  s.gold_label = label.get<int>();
  try {
    validate(s);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return s;
}

}  // namespace endeval
