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

#include "endeval/corpus/source_adapter.hpp"
#include "endeval/corpus/story.hpp"

namespace endeval {

// Loads and validates every record, preserving file order. Duplicate ids are
// rejected. An empty file yields an empty list.
std::vector<StoryInstance> load_dataset(const std::filesystem::path& path, const SourceAdapter& adapter);
std::vector<StoryInstance> load_dataset(const std::filesystem::path& path, const std::string& format);

// Canonical line-delimited form.
void save_dataset(const std::filesystem::path& path, const std::vector<StoryInstance>& instances);

// Digest of the canonical serialization; stable across file re-encodings.
std::string dataset_hash(const std::vector<StoryInstance>& instances);

}  // namespace endeval
