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

#include "endeval/human_eval/service.hpp"

#include <cstdlib>

#include <httplib.h>

#include "endeval/common/error.hpp"

namespace endeval {

Rating record_rating(RatingStore& store, const std::vector<AnnotationTask>& tasks, const Rating& rating) {
  validate(rating);
  bool known = false;
  for (const auto& t : tasks)
    if (t.task_id == rating.task_id) {
      known = true;
      break;
    }
  if (!known) throw NotFoundError("unknown task '" + rating.task_id + "'");
  return store.upsert(rating);
}

std::string admin_token_from_env() {
  const char* v = std::getenv("ENDEVAL_ADMIN_TOKEN");
  return v ? std::string(v) : std::string();
}

std::string instructions_html() {
  return R"(<!doctype html>
<html lang="en"><head><meta charset="utf-8"><title>Rating instructions</title></head>
<body>
<h1>Rating instructions</h1>
<p>Each task shows a short story <b>Context</b>, an <b>Instruction</b> and a one-sentence <b>Ending</b>.
Read all three, then give each of the following a score from 1 (poor) to 5 (excellent).</p>
<dl>
<dt>Fluency</dt>
<dd>Is the ending grammatical and natural English, regardless of the story?</dd>
<dt>Coherence</dt>
<dd>Does the ending fit the context? Characters, events and tone should be consistent with what came before.</dd>
<dt>Instruction-following</dt>
<dd>Is the ending a plausible answer to the instruction? Score 5 when the ending clearly answers it,
1 when it ignores or contradicts it.</dd>
</dl>
<p>Score each perspective on its own. A fluent ending can still ignore the instruction.
You can revise a score by submitting the task again.</p>
</body></html>
)";
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

}  // namespace

AnnotationService::AnnotationService(std::vector<AnnotationTask> tasks, std::shared_ptr<RatingStore> store,
                                     ServiceOptions options)
    : tasks_(std::move(tasks)),
      store_(std::move(store)),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  if (!store_) throw ConfigError("annotation service needs a rating store");
  install_routes();
}

AnnotationService::~AnnotationService() { stop(); }

void AnnotationService::install_routes() {
  auto& s = *server_;

  s.Get("/api/tasks", [this](const httplib::Request& req, httplib::Response& res) {
    auto annotator = req.get_param_value("annotator");
    if (annotator.empty()) return send_error(res, 400, "annotator query parameter is required");
    json unrated = json::array(), rated = json::array();
    for (const auto& t : tasks_) (store_->has(t.task_id, annotator) ? rated : unrated).push_back(public_view(t));
    for (auto& t : rated) unrated.push_back(std::move(t));
    send_json(res, 200, unrated);
  });

  s.Post("/api/ratings", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      return send_error(res, 400, "body is not valid JSON");
    }
    try {
      auto stored = record_rating(*store_, tasks_, rating_from_json(body));
      send_json(res, 200, to_json(stored));
    } catch (const ValidationError& e) {
      send_error(res, 422, e.what());
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what());
    }
  });

  s.Get("/api/progress", [this](const httplib::Request& req, httplib::Response& res) {
    auto annotator = req.get_param_value("annotator");
    if (annotator.empty()) return send_error(res, 400, "annotator query parameter is required");
    std::size_t rated = 0;
    for (const auto& t : tasks_) rated += store_->has(t.task_id, annotator);
    send_json(res, 200, json{{"annotator", annotator}, {"rated", rated}, {"total", tasks_.size()}});
  });

  s.Get("/api/export", [this](const httplib::Request& req, httplib::Response& res) {
    if (options_.admin_token.empty()) return send_error(res, 403, "export is disabled (no admin token configured)");
    if (req.get_header_value("Authorization") != "Bearer " + options_.admin_token)
      return send_error(res, 401, "admin token required");
    json out = json::array();
    for (const auto& r : store_->snapshot()) out.push_back(to_json(r));
    send_json(res, 200, out);
  });

  s.Get("/instructions", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(instructions_html(), "text/html; charset=utf-8");
  });

  if (options_.static_dir) {
    if (!s.set_mount_point("/", options_.static_dir->string()))
      throw ConfigError("static directory not found: " + options_.static_dir->string());
  }

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    } catch (...) {
      send_error(res, 500, "internal error");
    }
  });
}

bool AnnotationService::listen(const std::string& host, int port) { return server_->listen(host, port); }

int AnnotationService::bind_to_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool AnnotationService::listen_after_bind() { return server_->listen_after_bind(); }

void AnnotationService::wait_until_ready() const { server_->wait_until_ready(); }

void AnnotationService::stop() {
  if (server_) server_->stop();
}

}  // namespace endeval
