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
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "endeval/human_eval/ratings.hpp"
#include "endeval/human_eval/tasks.hpp"

namespace httplib {
class Server;
}

namespace endeval {

// NotFoundError for an unknown task, ValidationError for bad scores.
Rating record_rating(RatingStore& store, const std::vector<AnnotationTask>& tasks, const Rating& rating);

struct ServiceOptions {
  // Bearer token required by /api/export; empty disables export.
  std::string admin_token;
  // Served at / when set (the built annotation UI).
  std::optional<std::filesystem::path> static_dir;
};

// Reads ENDEVAL_ADMIN_TOKEN.
std::string admin_token_from_env();

// HTTP API for annotators:
//   GET  /api/tasks?annotator=ID     unrated tasks first, public fields only
//   POST /api/ratings                Rating JSON -> 200 stored | 400 | 404 | 422
//   GET  /api/progress?annotator=ID  {"annotator","rated","total"}
//   GET  /api/export                 all ratings; Authorization: Bearer <token>
//   GET  /instructions               rating guidelines
class AnnotationService {
 public:
  AnnotationService(std::vector<AnnotationTask> tasks, std::shared_ptr<RatingStore> store, ServiceOptions options = {});
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Blocks until stop().
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it; follow with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

  const std::vector<AnnotationTask>& tasks() const { return tasks_; }

 private:
  void install_routes();

  std::vector<AnnotationTask> tasks_;
  std::shared_ptr<RatingStore> store_;
  ServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;
};

std::string instructions_html();

}  // namespace endeval
