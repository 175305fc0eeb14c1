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

#include "endeval/scorers/lexical_mrc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"
#include "endeval/common/rng.hpp"
#include "endeval/common/text.hpp"

namespace endeval {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'L', 'X'};
constexpr std::uint32_t kFormatVersion = 1;

// Dense features live in the first slots of the weight vector.
enum Dense : std::uint32_t { kQuestionOverlap = 0, kQuestionOverlapFrac, kContextOverlapFrac, kLogLength, kDenseCount };

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> content_words(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens)
    if (!text::is_stopword(t)) out.push_back(t);
  return out;
}

}  // namespace

json to_json(const LexicalMrcConfig& c) {
  return json{{"epochs", c.epochs}, {"learning_rate", c.learning_rate}, {"seed", c.seed},
              {"hash_bits", c.hash_bits}, {"token_budget", c.token_budget}};
}

LexicalMrcConfig lexical_config_from_json(const json& j) {
  LexicalMrcConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.seed = j.value("seed", c.seed);
  c.hash_bits = j.value("hash_bits", c.hash_bits);
  c.token_budget = j.value("token_budget", c.token_budget);
  if (c.epochs < 1 || c.hash_bits < 8 || c.hash_bits > 26 || c.learning_rate <= 0 || c.token_budget < 8)
    throw ConfigError("lexical MRC config out of range: " + to_json(c).dump());
  return c;
}

LexicalMrc::LexicalMrc(LexicalMrcConfig config) : config_(config) {
  weights_.assign((std::size_t{1} << config_.hash_bits) + kDenseCount, 0.0f);
  refresh_id();
}

std::vector<LexicalMrc::Feature> LexicalMrc::features(const McQuery& q, std::size_t option) const {
  auto packed = pack_mc_input(q, option, config_.token_budget);
  auto qwords = content_words(packed.question);
  auto owords = content_words(packed.option);
  std::set<std::string> oset(owords.begin(), owords.end());
  std::set<std::string> qset(qwords.begin(), qwords.end());
  std::set<std::string> cset;
  for (const auto& t : content_words(packed.context)) cset.insert(t);

  std::size_t q_hits = 0;
  for (const auto& w : qset) q_hits += oset.count(w);
  std::size_t c_hits = 0;
  for (const auto& w : oset) c_hits += cset.count(w);

  const std::uint64_t mask = (std::uint64_t{1} << config_.hash_bits) - 1;
  auto slot = [&](std::string_view tag, std::string_view a, std::string_view b = {}) {
    std::uint64_t h = fnv1a(b, fnv1a("|", fnv1a(a, fnv1a(tag))));
    return static_cast<std::uint32_t>((h & mask) + kDenseCount);
  };

  std::vector<Feature> f;
  f.emplace_back(kQuestionOverlap, static_cast<float>(q_hits));
  f.emplace_back(kQuestionOverlapFrac, qset.empty() ? 0.0f : static_cast<float>(q_hits) / qset.size());
  f.emplace_back(kContextOverlapFrac, oset.empty() ? 0.0f : static_cast<float>(c_hits) / oset.size());
  f.emplace_back(kLogLength, static_cast<float>(std::log1p(packed.option.size())));
  if (!oset.empty()) {
    const float u = 1.0f / std::sqrt(static_cast<float>(oset.size()));
    for (const auto& o : oset) f.emplace_back(slot("u", o), u);
    if (!qset.empty()) {
      const float x = 1.0f / std::sqrt(static_cast<float>(oset.size() * qset.size()));
      for (const auto& qw : qset)
        for (const auto& o : oset) f.emplace_back(slot("x", qw, o), x);
    }
  }
  return f;
}

double LexicalMrc::score(const std::vector<Feature>& f) const {
  double s = 0;
  for (const auto& [i, v] : f) s += static_cast<double>(weights_[i]) * v;
  return s;
}

McPrediction LexicalMrc::predict(const McQuery& query) const {
  std::array<double, kEndingCount> scores{};
  for (std::size_t k = 0; k < kEndingCount; ++k) scores[k] = score(features(query, k));
  return prediction_from_scores(scores, ScoreKind::kLogits);
}

std::string LexicalMrc::id() const { return id_; }

void LexicalMrc::refresh_id() {
  std::string_view bytes(reinterpret_cast<const char*>(weights_.data()), weights_.size() * sizeof(float));
  id_ = "mrc-lexical@" + sha256_hex(bytes).substr(0, 12);
}

std::vector<LexicalMrc::EpochStats> LexicalMrc::fit(const std::vector<McQuery>& train,
                                                    const std::vector<int>& train_labels,
                                                    const std::vector<McQuery>& valid,
                                                    const std::vector<int>& valid_labels) {
  if (train.size() != train_labels.size() || valid.size() != valid_labels.size())
    throw ValidationError("fit: queries and labels differ in length");
  if (train.empty()) throw DomainError("fit: empty training set");

  // Features are fixed per query, so compute them once.
  std::vector<std::array<std::vector<Feature>, kEndingCount>> cache(train.size());
  for (std::size_t i = 0; i < train.size(); ++i)
    for (std::size_t k = 0; k < kEndingCount; ++k) cache[i][k] = features(train[i], k);

  std::vector<float> grad_sq(weights_.size(), 0.0f);
  std::vector<float> best = weights_;
  double best_acc = -1;
  std::vector<EpochStats> history;
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  DeterministicRng rng(config_.seed);
  const double eps = 1e-8;

  for (int epoch = 1; epoch <= config_.epochs; ++epoch) {
    rng.shuffle(order);
    double loss = 0;
    for (auto i : order) {
      std::array<double, kEndingCount> s{};
      for (std::size_t k = 0; k < kEndingCount; ++k) s[k] = score(cache[i][k]);
      const double mx = *std::max_element(s.begin(), s.end());
      double z = 0;
      for (auto& v : s) z += (v = std::exp(v - mx));
      const auto gold = static_cast<std::size_t>(train_labels[i]);
      loss -= std::log(std::max(s[gold] / z, 1e-300));
      for (std::size_t k = 0; k < kEndingCount; ++k) {
        const double g = s[k] / z - (k == gold ? 1.0 : 0.0);
        if (g == 0.0) continue;
        for (const auto& [j, v] : cache[i][k]) {
          const double gj = g * v;
          grad_sq[j] += static_cast<float>(gj * gj);
          weights_[j] -= static_cast<float>(config_.learning_rate * gj / std::sqrt(grad_sq[j] + eps));
        }
      }
    }
    double acc = 0;
    if (!valid.empty()) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < valid.size(); ++i) hits += predict(valid[i]).label == valid_labels[i];
      acc = static_cast<double>(hits) / valid.size();
    }
    history.push_back({epoch, loss / train.size(), acc});
    if (valid.empty() || acc > best_acc) {
      best_acc = acc;
      best = weights_;
    }
  }
  weights_ = std::move(best);
  refresh_id();
  return history;
}

void LexicalMrc::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::string buf(kMagic, sizeof kMagic);
  auto put32 = [&](std::uint32_t v) { buf.append(reinterpret_cast<const char*>(&v), 4); };
  auto put64 = [&](std::uint64_t v) { buf.append(reinterpret_cast<const char*>(&v), 8); };
  put32(kFormatVersion);
  put64(weights_.size());
  buf.append(reinterpret_cast<const char*>(weights_.data()), weights_.size() * sizeof(float));
  write_text_atomic(dir / "weights.bin", buf);
  write_json_file(dir / "model.json", json{{"backend", "lexical"}, {"config", to_json(config_)}});
}

LexicalMrc LexicalMrc::load(const std::filesystem::path& dir) {
  auto meta = read_json_file(dir / "model.json");
  LexicalMrc m(lexical_config_from_json(meta.at("config")));
  auto buf = read_text_file(dir / "weights.bin");
  if (buf.size() < 16 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw LoadError((dir / "weights.bin").string() + ": not a lexical MRC weight file");
  std::uint32_t version;
  std::uint64_t n;
  std::memcpy(&version, buf.data() + 4, 4);
  std::memcpy(&n, buf.data() + 8, 8);
  if (version != kFormatVersion) throw LoadError("unsupported weight format version " + std::to_string(version));
  if (n != m.weights_.size() || buf.size() != 16 + n * sizeof(float))
    throw LoadError((dir / "weights.bin").string() + ": size does not match model config");
  std::memcpy(m.weights_.data(), buf.data() + 16, n * sizeof(float));
  m.refresh_id();
  return m;
}

}  // namespace endeval
