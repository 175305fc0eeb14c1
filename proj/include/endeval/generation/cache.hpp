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
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "endeval/generation/record.hpp"

namespace endeval {

// Append-only store of GenerationRecords keyed by
// (instance_id, generator_name, prompt_hash). A torn final line left by an
// interrupted writer is truncated on open; damage anywhere else is a
// LoadError. All methods are thread-safe; appends are serialized.
class GenerationCache {
 public:
  using Key = std::tuple<std::string, std::string, std::string>;

  // In-memory only.
  GenerationCache() = default;
  explicit GenerationCache(std::filesystem::path path);

  std::optional<GenerationRecord> find(const std::string& instance_id,
                                       const std::string& generator_name,
                                       const std::string& prompt_hash) const;
  // First write for a key wins; later puts for the same key are ignored.
  void put(const GenerationRecord& record);

  std::size_t size() const;
  // Bytes dropped from a torn trailing line when the file was opened.
  std::size_t truncated_bytes() const { return truncated_bytes_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<Key, GenerationRecord> records_;
  std::size_t truncated_bytes_ = 0;
};

}  // namespace endeval
