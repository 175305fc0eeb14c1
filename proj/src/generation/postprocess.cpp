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

#include "endeval/generation/postprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "endeval/common/error.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

namespace {

constexpr std::string_view kEchoPrefix = "ending:";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_abbreviation(std::string_view t, std::size_t dot) {
  static constexpr std::array<std::string_view, 9> kAbbrev = {"mr", "mrs", "ms", "dr", "st",
                                                             "jr", "sr", "prof", "mt"};
  std::size_t b = dot;
  while (b > 0 && std::isalpha(static_cast<unsigned char>(t[b - 1]))) --b;
  auto word = text::to_lower(t.substr(b, dot - b));
  return std::find(kAbbrev.begin(), kAbbrev.end(), word) != kAbbrev.end();
}

// Length of a closing quote/bracket starting at i, 0 if none.
std::size_t closer_at(std::string_view t, std::size_t i) {
  char c = t[i];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  // U+201D and U+2019 in UTF-8
  if (t.substr(i, 3) == "\xE2\x80\x9D" || t.substr(i, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

}  // namespace

std::string postprocess_ending(std::string_view raw) {
  const std::string stripped = text::trim(raw);
  if (stripped.empty()) throw GenerationError("generated output is blank", std::string(raw));

  std::string t = stripped;
  while (text::istarts_with(t, kEchoPrefix)) t = text::trim(std::string_view(t).substr(kEchoPrefix.size()));
  if (t.empty()) return stripped;

  std::string_view v(t);
  for (std::size_t i = 0; i < v.size(); ++i) {
    char c = v[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < v.size()) {
      if (v[j] == '.' || v[j] == '!' || v[j] == '?') {
        ++j;
        continue;
      }
      auto n = closer_at(v, j);
      if (n == 0) break;
      j += n;
    }
    if (j >= v.size() || !is_space(v[j])) continue;
    if (c == '.' && j == i + 1 && is_abbreviation(v, i)) continue;
    // An ellipsis, or a quoted exclamation followed by lowercase ("!" she
    // said), continues the sentence.
    std::size_t k = j;
    while (k < v.size() && is_space(v[k])) ++k;
    const bool lower_next = k < v.size() && std::islower(static_cast<unsigned char>(v[k]));
    const bool ellipsis = c == '.' && i + 1 < v.size() && v[i + 1] == '.';
    const bool quoted = closer_at(v, j - 1) > 0 || (j >= 3 && closer_at(v, j - 3) == 3);
    if (lower_next && (ellipsis || quoted)) {
      i = j - 1;
      continue;
    }
    return std::string(v.substr(0, j));
  }
  return t;
}

}  // namespace endeval
