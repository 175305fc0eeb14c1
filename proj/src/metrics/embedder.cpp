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

#include "endeval/metrics/embedder.hpp"

#include <cmath>
#include <cstdlib>

#include "endeval/common/error.hpp"
#include "endeval/common/http.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

HashingEmbedder::HashingEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ConfigError("embedding dimension must be positive");
}

std::vector<Embedding> HashingEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    Embedding v(dim_, 0.0);
    auto tokens = text::word_tokens(t);
    auto add = [&](const std::string& feat) {
      auto h = fnv1a(feat);
      v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      add("u:" + tokens[i]);
      if (i + 1 < tokens.size()) add("b:" + tokens[i] + " " + tokens[i + 1]);
    }
    out.push_back(std::move(v));
  }
  return out;
}

TableEmbedder::TableEmbedder(std::map<std::string, Embedding> table, std::string id)
    : table_(std::move(table)), id_(std::move(id)) {}

TableEmbedder TableEmbedder::from_file(const std::filesystem::path& path) {
  std::map<std::string, Embedding> table;
  for (const auto& r : read_jsonl(path)) {
    try {
      table[r.value.at("text").get<std::string>()] = r.value.at("embedding").get<Embedding>();
    } catch (const json::exception& e) {
      throw LoadError(path.string() + ": record " + std::to_string(r.index) + ": " + e.what());
    }
  }
  return TableEmbedder(std::move(table), "table:" + path.filename().string());
}

std::vector<Embedding> TableEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto it = table_.find(t);
    if (it == table_.end()) throw NotFoundError("no embedding for text: " + t);
    out.push_back(it->second);
  }
  return out;
}

HttpEmbedder::HttpEmbedder(std::string url, std::string model, std::string auth_env, std::size_t batch_size)
    : url_(std::move(url)), model_(std::move(model)), auth_env_(std::move(auth_env)), batch_size_(batch_size) {
  http::parse_url(url_);
  if (batch_size_ == 0) throw ConfigError("embedding batch size must be positive");
}

std::vector<Embedding> HttpEmbedder::embed(const std::vector<std::string>& texts) {
  std::map<std::string, std::string> headers;
  if (!auth_env_.empty()) {
    const char* token = std::getenv(auth_env_.c_str());
    if (!token) throw BackendError("auth token env var " + auth_env_ + " is not set", false);
    headers["Authorization"] = std::string("Bearer ") + token;
  }
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += batch_size_) {
    std::vector<std::string> chunk(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                   texts.begin() + static_cast<std::ptrdiff_t>(std::min(texts.size(), start + batch_size_)));
    auto res = http::post_json(url_, json{{"model", model_}, {"input", chunk}}.dump(), headers);
    if (res.status != 200)
      throw BackendError("embedding endpoint returned HTTP " + std::to_string(res.status));
    try {
      auto data = json::parse(res.body).at("data");
      if (data.size() != chunk.size()) throw BackendError("embedding endpoint returned wrong count");
      for (const auto& d : data) out.push_back(d.at("embedding").get<Embedding>());
    } catch (const json::exception& e) {
      throw BackendError(std::string("embedding endpoint: unexpected response: ") + e.what());
    }
  }
  return out;
}

json to_json(const EmbedderSpec& s) {
  return json{{"model", s.model_id}, {"backend", s.backend}, {"location", s.location}, {"auth_env", s.auth_env}};
}

EmbedderSpec embedder_spec_from_json(const json& j) {
  EmbedderSpec s;
  s.backend = j.value("backend", s.backend);
  s.model_id = j.value("model", s.backend == "hashing" ? s.model_id : std::string());
  s.location = j.value("location", "");
  s.auth_env = j.value("auth_env", "");
  if (s.backend != "hashing" && s.backend != "table" && s.backend != "http")
    throw ConfigError("embedder.backend must be hashing, table or http");
  if (s.backend != "hashing" && s.location.empty())
    throw ConfigError("embedder.location is required for the " + s.backend + " backend");
  if (s.backend == "http" && s.model_id.empty()) throw ConfigError("embedder.model is required for the http backend");
  return s;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec) {
  if (spec.backend == "hashing") {
    std::size_t dim = 512;
    auto dash = spec.model_id.rfind('-');
    if (dash != std::string::npos) {
      try {
        dim = std::stoul(spec.model_id.substr(dash + 1));
      } catch (const std::exception&) {
      }
    }
    return std::make_unique<HashingEmbedder>(dim);
  }
  if (spec.backend == "table") return std::make_unique<TableEmbedder>(TableEmbedder::from_file(spec.location));
  return std::make_unique<HttpEmbedder>(spec.location, spec.model_id, spec.auth_env);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size() || a.empty())
    throw ValidationError("embedding dimensions differ (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) throw ValidationError("zero-norm embedding cannot be L2-normalized");
  // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): for a == b it is exactly
  // na, so identical vectors give a similarity of exactly 1.
  return dot / std::sqrt(na * nb);
}

}  // namespace endeval
