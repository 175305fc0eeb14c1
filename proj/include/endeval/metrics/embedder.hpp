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
#include <memory>
#include <string>
#include <vector>

#include "endeval/common/jsonl.hpp"

namespace endeval {

using Embedding = std::vector<double>;

class Embedder {
 public:
  virtual ~Embedder() = default;
  // One vector per input text, same order. Implementations may batch.
  virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) = 0;
  virtual std::string id() const = 0;
};

// Signed feature hashing of lowercase word unigrams and bigrams. Needs no
// model files; its similarity is lexical, not semantic.
class HashingEmbedder final : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dim = 512);
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::string id() const override { return "hashing-bow-" + std::to_string(dim_); }

 private:
  std::size_t dim_;
};

// Precomputed vectors looked up by exact text; unknown text is an error.
class TableEmbedder final : public Embedder {
 public:
  TableEmbedder(std::map<std::string, Embedding> table, std::string id = "table");
  // Lines of {"text": ..., "embedding": [...]}.
  static TableEmbedder from_file(const std::filesystem::path& path);
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::string id() const override { return id_; }

 private:
  std::map<std::string, Embedding> table_;
  std::string id_;
};

// OpenAI-compatible embeddings endpoint: POST {"model", "input": [...]} and
// read data[i].embedding.
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(std::string url, std::string model, std::string auth_env = {}, std::size_t batch_size = 64);
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::string id() const override { return model_; }

 private:
  std::string url_;
  std::string model_;
  std::string auth_env_;
  std::size_t batch_size_;
};

struct EmbedderSpec {
  std::string model_id = "hashing-bow-512";  // recorded in reports
  std::string backend = "hashing";           // hashing | table | http
  std::string location;                      // table file or endpoint URL
  std::string auth_env;
  // Similarity is always cosine.
};

json to_json(const EmbedderSpec& s);
EmbedderSpec embedder_spec_from_json(const json& j);
std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec);

// Cosine similarity after L2 normalization. Throws ValidationError for
// zero-norm vectors or a dimension mismatch.
double cosine_similarity(const Embedding& a, const Embedding& b);

}  // namespace endeval
