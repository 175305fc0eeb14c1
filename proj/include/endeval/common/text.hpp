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
#include <string_view>
#include <vector>

namespace endeval::text {

std::string trim(std::string_view s);
bool is_blank(std::string_view s);

// Whitespace tokenization; the word-count rule used by length statistics.
std::vector<std::string_view> split_whitespace(std::string_view s);
std::size_t word_count(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string to_lower(std::string_view s);
bool istarts_with(std::string_view s, std::string_view prefix);

// Lowercased alphanumeric tokens (apostrophes kept inside words).
std::vector<std::string> word_tokens(std::string_view s);

bool is_stopword(std::string_view lowered);

}  // namespace endeval::text
