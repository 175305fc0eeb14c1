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

#include <doctest.h>

#include <cmath>

#include "endeval/common/error.hpp"
#include "endeval/corpus/splits.hpp"
#include "endeval/metrics/substitution.hpp"
#include "endeval/scorers/evaluators.hpp"
#include "endeval/scorers/judge.hpp"
#include "endeval/scorers/lexical_mrc.hpp"
#include "endeval/scorers/nsp.hpp"
#include "endeval/scorers/training.hpp"
#include "support/scripted.hpp"
#include "support/synthetic.hpp"

using namespace endeval;

namespace {

std::vector<McQuery> queries(const std::vector<StoryInstance>& xs) {
  std::vector<McQuery> out;
  for (const auto& s : xs) out.push_back(McQuery::from_instance(s));
  return out;
}

std::vector<int> labels(const std::vector<StoryInstance>& xs) {
  std::vector<int> out;
  for (const auto& s : xs) out.push_back(s.gold_label);
  return out;
}

}  // namespace

TEST_SUITE("scorers") {
  TEST_CASE("argmax picks the lowest index on ties") {
    std::array<double, 4> s{0.1, 0.7, 0.7, 0.2};
    CHECK(argmax_lowest(s) == 1);
    std::array<double, 4> flat{1, 1, 1, 1};
    CHECK(argmax_lowest(flat) == 0);
    CHECK(prediction_from_scores({-1, -2, 3, 3}).label == 2);
  }

  TEST_CASE("packing drops context from the left") {
    McQuery q;
    q.context = {"a b c", "d e f", "g h i", "j k l"};
    q.question = "why q";
    q.options = {"x y", "o", "o", "o"};
    auto p = pack_mc_input(q, 0, 10);
    CHECK(p.question.size() == 2);
    CHECK(p.option.size() == 2);
    CHECK(p.context.size() == 6);
    CHECK(p.dropped_context_tokens == 6);
    CHECK(p.context.front() == "g");
    auto roomy = pack_mc_input(q, 0, 100);
    CHECK(roomy.dropped_context_tokens == 0);
  }

  TEST_CASE("query validation") {
    auto s = testing::synthetic_corpus(1, 1)[0];
    auto q = McQuery::from_instance(s);
    CHECK_NOTHROW(validate(q));
    q.options[1] = "";
    CHECK_THROWS_AS(validate(q), ValidationError);
  }

  TEST_CASE("lexical reader learns the synthetic task and round-trips") {
    testing::TempDir dir;
    auto corpus = testing::synthetic_corpus(900, 21);
    auto m = make_splits(corpus, 3);
    auto train = select(corpus, m.mrc_train), valid = select(corpus, m.mrc_valid), test = select(corpus, m.mrc_test);
    TrainingConfig cfg;
    auto trained = train_mrc(train, valid, test, m, cfg, dir / "ckpt");
    CHECK(trained.metrics.test_accuracy > 0.8);
    CHECK(trained.metrics.n_train == train.size());
    for (auto f : {"model.json", "training_config.json", "split_manifest.sha256", "metrics.json"})
      CHECK_MESSAGE(std::filesystem::exists(dir / "ckpt" / f), f);

    auto loaded = load_mrc_checkpoint(dir / "ckpt");
    CHECK(loaded->id() == trained.model->id());
    for (const auto& q : queries(test)) CHECK(loaded->predict(q) == trained.model->predict(q));
    CHECK(mrc_accuracy(*loaded, test) == doctest::Approx(trained.metrics.test_accuracy));
  }

  TEST_CASE("training refuses generation-evaluation instances") {
    testing::TempDir dir;
    auto corpus = testing::synthetic_corpus(200, 4);
    auto m = make_splits(corpus, 1);
    auto leaky = select(corpus, m.mrc_train);
    leaky.push_back(select(corpus, {m.gen_eval.front()})[0]);
    CHECK_THROWS_AS(check_no_leakage(leaky, m, "train"), LeakageError);
    CHECK_THROWS_AS(train_mrc(leaky, select(corpus, m.mrc_valid), select(corpus, m.mrc_test), m, {}, dir / "c"),
                    LeakageError);
  }

  TEST_CASE("lexical fit is deterministic") {
    auto corpus = testing::synthetic_corpus(120, 5);
    LexicalMrc a, b;
    a.fit(queries(corpus), labels(corpus), {}, {});
    b.fit(queries(corpus), labels(corpus), {}, {});
    CHECK(a.id() == b.id());
  }

  TEST_CASE("mrc evaluator substitutes at the gold index") {
    // A model that picks whichever option contains the word "generated".
    struct Finder final : MrcModel {
      McPrediction predict(const McQuery& q) const override {
        std::array<double, 4> s{};
        for (std::size_t i = 0; i < 4; ++i) s[i] = q.options[i].find("generated") != std::string::npos;
        return prediction_from_scores(s);
      }
      std::string id() const override { return "finder"; }
    };
    MrcEvaluator ev(std::make_shared<Finder>());
    auto corpus = testing::synthetic_corpus(20, 6);
    for (const auto& s : corpus) {
      auto v = ev.evaluate(s, "A generated ending.");
      CHECK(v.follows);
      CHECK(v.predicted_label == s.gold_label);
    }
    CHECK_THROWS_AS(ev.evaluate(corpus[0], "  "), ValidationError);
  }

  TEST_CASE("stub modes") {
    auto corpus = testing::synthetic_corpus(50, 7);
    StubEvaluator always(StubMode::kAlwaysGold), never(StubMode::kNeverGold), rnd(StubMode::kRandom, 9);
    std::size_t random_hits = 0;
    for (const auto& s : corpus) {
      CHECK(always.evaluate(s, "x").follows);
      auto n = never.evaluate(s, "x");
      CHECK_FALSE(n.follows);
      CHECK(n.predicted_label == (s.gold_label + 1) % 4);
      auto r = rnd.evaluate(s, "x");
      CHECK(r.follows == (r.predicted_label == s.gold_label));
      CHECK(rnd.evaluate(s, "y").predicted_label == r.predicted_label);
      random_hits += r.follows;
    }
    CHECK(random_hits > 0);
    CHECK(random_hits < corpus.size());
    CHECK(always.id() != never.id());
  }

  TEST_CASE("nsp threshold is inclusive and needs a head") {
    auto s = testing::synthetic_corpus(1, 1)[0];
    auto model = std::make_shared<ScriptedNsp>([](const std::string&, const std::string&) { return 0.5; });
    CHECK(nsp_follow(nsp_premise(s), "e", *model, 0.5).follows);
    CHECK_FALSE(nsp_follow(nsp_premise(s), "e", *model, 0.51).follows);
    CHECK(nsp_premise(s) == s.context_text() + " " + s.question);
    ScriptedNsp headless([](auto&, auto&) { return 1.0; }, false);
    CHECK_THROWS_AS(nsp_follow("p", "e", headless), ConfigError);
    CHECK_THROWS_AS(NspEvaluator(std::make_shared<ScriptedNsp>([](auto&, auto&) { return 1.0; }, false)),
                    ConfigError);
  }

  TEST_CASE("judge reply parsing") {
    CHECK(parse_judge_reply("Follow") == true);
    CHECK(parse_judge_reply("The ending does NOT follow the instruction.") == false);
    CHECK(parse_judge_reply("Verdict: follows.") == true);
    CHECK(parse_judge_reply("not follows") == false);
    CHECK(parse_judge_reply("I cannot tell.") == std::nullopt);
    CHECK(parse_judge_reply("") == std::nullopt);
  }

  TEST_CASE("judge re-asks once then abstains") {
    auto s = testing::synthetic_corpus(1, 1)[0];
    auto vague = std::make_shared<testing::ScriptedBackend>([](const GenerationRequest&, int) { return "Hmm."; });
    JudgeEvaluator judge("j", vague, JudgeOptions{kJudgePromptVersion, {}, [](auto) {}});
    auto v = judge.evaluate(s, "Ending.");
    CHECK(v.abstained);
    CHECK(vague->calls() == 2);

    auto second = std::make_shared<testing::ScriptedBackend>(
        [](const GenerationRequest&, int call) -> std::string { return call == 1 ? "unsure" : "Not follow"; });
    JudgeEvaluator judge2("j", second, JudgeOptions{kJudgePromptVersion, {}, [](auto) {}});
    auto v2 = judge2.evaluate(s, "Ending.");
    CHECK_FALSE(v2.abstained);
    CHECK_FALSE(v2.follows);

    auto prompt = render_judge_prompt("C.", "Q?", "E.");
    CHECK(prompt.find("C.") != std::string::npos);
    CHECK(prompt.find("Q?") != std::string::npos);
    CHECK_THROWS_AS(render_judge_prompt("C", "Q", "E", "judge-v0"), ConfigError);
  }

  TEST_CASE("evaluator factory") {
    ScorerSpec spec;
    spec.backend = EvaluatorKind::kStub;
    spec.stub_mode = StubMode::kNeverGold;
    auto ev = make_evaluator(spec);
    CHECK(ev->kind() == EvaluatorKind::kStub);
    spec.backend = EvaluatorKind::kMrc;
    CHECK_THROWS_AS(make_evaluator(spec), ConfigError);
    spec.backend = EvaluatorKind::kJudge;
    CHECK_THROWS_AS(make_evaluator(spec), ConfigError);
  }
}
