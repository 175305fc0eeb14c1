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

#include "support/synthetic.hpp"

#include <array>
#include <atomic>
#include <unistd.h>

namespace endeval::testing {

namespace {

constexpr std::array kNames{"Anna", "Ben", "Carla", "Dev", "Emma", "Farid", "Gina", "Hugo", "Iris", "Jonas",
                            "Kira", "Liam", "Mona", "Nils", "Omar", "Pia", "Quinn", "Rosa", "Sami", "Tara"};
constexpr std::array kPlaces{"the park", "the market", "the lake", "the library", "the station",
                             "the beach", "the forest", "the museum", "the bakery", "the garage"};
constexpr std::array kObjects{"a red kite", "an old map", "a small dog", "a wooden box", "a blue bike",
                              "a paper boat", "a silver key", "a heavy bag", "a broken radio", "a tall ladder"};
constexpr std::array kOpeners{"went to", "walked to", "drove to", "ran to", "hurried to"};

struct Theme {
  const char* question;
  std::array<const char*, 4> cues;
};
constexpr std::array<Theme, 6> kThemes{{
    {"Which ending is the happiest?", {"smiled and laughed", "celebrated with friends", "felt joyful", "cheered loudly"}},
    {"Which ending is the most dangerous?", {"slipped near the fire", "was injured badly", "fell from the cliff", "faced a storm"}},
    {"Which ending is the saddest?", {"cried alone", "lost everything", "felt lonely and tearful", "mourned quietly"}},
    {"Which ending is the most surprising?", {"suddenly found treasure", "was shocked to see aliens", "discovered a secret door", "unexpectedly won a prize"}},
    {"Which ending is the funniest?", {"tripped over a banana", "wore a silly hat", "danced like a clown", "told a ridiculous joke"}},
    {"Which ending is the most peaceful?", {"rested in the calm", "watched the quiet sunset", "breathed slowly and relaxed", "sat in gentle silence"}},
}};

template <typename A>
const char* pick(DeterministicRng& rng, const A& options) {
  return options[rng.below(options.size())];
}

}  // namespace

std::vector<StoryInstance> synthetic_corpus(std::size_t n, std::uint64_t seed) {
  DeterministicRng rng(seed);
  std::vector<StoryInstance> out;
  out.reserve(n);
  std::size_t story = 0;
  while (out.size() < n) {
    std::string name = pick(rng, kNames);
    std::string place = pick(rng, kPlaces);
    std::string object = pick(rng, kObjects);
    std::array<std::string, kContextSentences> context{
        name + " " + pick(rng, kOpeners) + " " + place + " on day " + std::to_string(story) + ".",
        "There " + name + " noticed " + object + ".",
        name + " picked up " + object + " and looked around.",
        "A stranger at " + place + " asked " + name + " about it.",
    };
    std::vector<std::size_t> themes{0, 1, 2, 3, 4, 5};
    rng.shuffle(themes);
    themes.resize(kEndingCount);
    std::array<std::string, kEndingCount> endings;
    for (std::size_t k = 0; k < kEndingCount; ++k)
      endings[k] = name + " " + pick(rng, kThemes[themes[k]].cues) + " at " + place + ".";

    std::size_t questions = 1 + rng.below(4);
    questions = std::min(questions, n - out.size());
    std::vector<std::size_t> golds{0, 1, 2, 3};
    rng.shuffle(golds);
    for (std::size_t q = 0; q < questions; ++q) {
      StoryInstance s;
      s.id = "syn-" + std::to_string(story) + "-" + std::to_string(q);
      s.context = context;
      s.endings = endings;
      s.gold_label = static_cast<int>(golds[q]);
      s.question = kThemes[themes[golds[q]]].question;
      out.push_back(std::move(s));
    }
    ++story;
  }
  return out;
}

std::string random_sentence(DeterministicRng& rng, std::size_t min_words, std::size_t max_words) {
  static constexpr std::array kWords{"the", "a", "dog", "ran", "home", "quickly", "storm", "light", "she", "he",
                                     "found", "lost", "river", "small", "bright", "cold", "friend", "door",
                                     "opened", "never", "again", "song", "city", "quiet", "strange"};
  std::size_t len = min_words + rng.below(max_words - min_words + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) s += ' ';
    s += pick(rng, kWords);
  }
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s + ".";
}

StoryInstance random_instance(DeterministicRng& rng, const std::string& id) {
  StoryInstance s;
  s.id = id;
  for (auto& c : s.context) c = random_sentence(rng, 3, 10);
  s.question = random_sentence(rng, 3, 8);
  s.question.back() = '?';
  for (auto& e : s.endings) e = random_sentence(rng, 2, 12);
  s.gold_label = static_cast<int>(rng.below(kEndingCount));
  return s;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("endeval-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace endeval::testing
