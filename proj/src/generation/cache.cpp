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

#include "endeval/generation/cache.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <ctime>
#include <fstream>

#include "endeval/common/error.hpp"

namespace endeval {

json to_json(const GenerationRecord& r) {
  return json{{"instance_id", r.instance_id}, {"generator_name", r.generator_name},
              {"prompt_hash", r.prompt_hash}, {"prompt", r.prompt},
              {"raw_output", r.raw_output},   {"ending", r.ending},
              {"created_at", r.created_at},   {"attempt", r.attempt}};
}

GenerationRecord record_from_json(const json& j) {
  try {
    GenerationRecord r;
    r.instance_id = j.at("instance_id").get<std::string>();
    r.generator_name = j.at("generator_name").get<std::string>();
    r.prompt_hash = j.at("prompt_hash").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.raw_output = j.at("raw_output").get<std::string>();
    r.ending = j.at("ending").get<std::string>();
    r.created_at = j.at("created_at").get<std::string>();
    r.attempt = j.at("attempt").get<int>();
    return r;
  } catch (const json::exception& e) {
    throw LoadError(std::string("generation record: ") + e.what());
  }
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

GenerationCache::GenerationCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  if (!std::filesystem::exists(path_)) return;

  std::ifstream in(path_, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  std::size_t pos = 0;
  std::size_t good_end = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    bool last = nl == std::string::npos || nl + 1 >= content.size();
    auto line = content.substr(pos, (nl == std::string::npos ? content.size() : nl) - pos);
    ++line_no;
    try {
      if (nl == std::string::npos) throw std::runtime_error("unterminated");
      if (!line.empty()) {
        auto r = record_from_json(json::parse(line));
        records_.try_emplace(Key{r.instance_id, r.generator_name, r.prompt_hash}, std::move(r));
      }
      good_end = nl + 1;
    } catch (const std::exception& e) {
      if (!last)
        throw LoadError(path_.string() + ":" + std::to_string(line_no) + ": corrupt cache line: " + e.what());
      break;
    }
    pos = nl == std::string::npos ? content.size() : nl + 1;
  }
  if (good_end < content.size()) {
    truncated_bytes_ = content.size() - good_end;
    std::filesystem::resize_file(path_, good_end);
  }
}

std::optional<GenerationRecord> GenerationCache::find(const std::string& instance_id,
                                                      const std::string& generator_name,
                                                      const std::string& prompt_hash) const {
  std::lock_guard lock(mu_);
  auto it = records_.find(Key{instance_id, generator_name, prompt_hash});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void GenerationCache::put(const GenerationRecord& record) {
  std::lock_guard lock(mu_);
  auto [it, fresh] =
      records_.try_emplace(Key{record.instance_id, record.generator_name, record.prompt_hash}, record);
  if (!fresh || path_.empty()) return;
  auto line = to_json(record).dump() + "\n";
  int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error("cannot open cache " + path_.string());
  auto written = ::write(fd, line.data(), line.size());
  ::fsync(fd);
  ::close(fd);
  if (written != static_cast<ssize_t>(line.size())) throw Error("short write to cache " + path_.string());
}

std::size_t GenerationCache::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

}  // namespace endeval
