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

#include <httplib.h>
#include <thread>

#include "endeval/common/error.hpp"
#include "endeval/human_eval/agreement.hpp"
#include "endeval/human_eval/service.hpp"
#include "endeval/metrics/report.hpp"
#include "support/synthetic.hpp"

using namespace endeval;

namespace {

EvalRun run_over(const std::vector<StoryInstance>& xs, const std::string& name, std::size_t follow_every) {
  EvalRun r;
  r.generator_name = name;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool f = i % follow_every == 0;
    r.verdicts.push_back({xs[i].id, f ? xs[i].gold_label : (xs[i].gold_label + 1) % 4, xs[i].gold_label, f, false,
                          "Ending " + xs[i].id + "."});
  }
  return r;
}

std::vector<AnnotationTask> small_tasks(std::size_t n_follow, std::size_t n_not) {
  std::vector<AnnotationTask> ts;
  for (std::size_t i = 0; i < n_follow + n_not; ++i)
    ts.push_back({"t" + std::to_string(i), "i" + std::to_string(i), "secret-model", "Ctx.", "Q?", "End.",
                  i < n_follow ? Strata::kFollow : Strata::kNotFollow});
  return ts;
}

Rating rate(const std::string& task, const std::string& who, int f, int c, int i) {
  return Rating{task, who, f, c, i, ""};
}

struct LiveService {
  AnnotationService service;
  int port;
  std::thread thread;
  LiveService(std::vector<AnnotationTask> tasks, std::shared_ptr<RatingStore> store, ServiceOptions opts)
      : service(std::move(tasks), std::move(store), std::move(opts)) {
    port = service.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { service.listen_after_bind(); });
    service.wait_until_ready();
  }
  ~LiveService() {
    service.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

}  // namespace

TEST_SUITE("human_eval") {
  TEST_CASE("default sampling draws 25 Follow and 20 NotFollow") {
    auto corpus = testing::synthetic_corpus(200, 3);
    auto runs = std::vector<EvalRun>{run_over(corpus, "m1", 2), run_over(corpus, "m2", 3)};
    auto tasks = sample_tasks(runs, corpus);
    REQUIRE(tasks.size() == 45);
    std::size_t follow = 0;
    std::set<std::pair<std::string, std::string>> keys;
    for (const auto& t : tasks) {
      follow += t.hidden_strata == Strata::kFollow;
      keys.insert({t.instance_id, t.generator_name});
    }
    CHECK(follow == 25);
    CHECK(keys.size() == 45);
    CHECK(sample_tasks(runs, corpus) == tasks);
    SamplingOptions other;
    other.seed = 1;
    CHECK(sample_tasks(runs, corpus, other) != tasks);

    // The first 25 positions are not simply the Follow stratum.
    std::size_t leading = 0;
    while (leading < tasks.size() && tasks[leading].hidden_strata == Strata::kFollow) ++leading;
    CHECK(leading < 25);
  }

  TEST_CASE("sampling edge cases") {
    auto corpus = testing::synthetic_corpus(30, 3);
    auto runs = std::vector<EvalRun>{run_over(corpus, "m", 2)};
    CHECK(sample_tasks(runs, corpus, SamplingOptions{0, 0, 0, {}}).empty());
    CHECK_THROWS_WITH_AS(sample_tasks(runs, corpus, SamplingOptions{20, 0, 0, {}}),
                         doctest::Contains("short by 5"), SamplingError);
    SamplingOptions only;
    only.n_follow = 1;
    only.n_not_follow = 1;
    only.models = {"absent"};
    CHECK_THROWS_AS(sample_tasks(runs, corpus, only), SamplingError);
  }

  TEST_CASE("tasks file round trip") {
    testing::TempDir dir;
    auto ts = small_tasks(2, 1);
    save_tasks(dir / "tasks.json", ts);
    CHECK(load_tasks(dir / "tasks.json") == ts);
  }

  TEST_CASE("rating store upserts, validates and persists") {
    testing::TempDir dir;
    auto tasks = small_tasks(2, 2);
    {
      RatingStore store(dir / "r.jsonl");
      auto stored = record_rating(store, tasks, rate("t0", "a", 4, 4, 5));
      CHECK(stored.instruction_following == 5);
      CHECK_FALSE(stored.submitted_at.empty());
      record_rating(store, tasks, rate("t0", "a", 3, 3, 3));
      CHECK(store.size() == 1);
      CHECK(store.snapshot()[0].fluency == 3);
      CHECK_THROWS_AS(record_rating(store, tasks, rate("t0", "a", 6, 3, 3)), ValidationError);
      CHECK_THROWS_AS(record_rating(store, tasks, rate("t0", "a", 3, 0, 3)), ValidationError);
      CHECK_THROWS_AS(record_rating(store, tasks, rate("nope", "a", 3, 3, 3)), NotFoundError);
      record_rating(store, tasks, rate("t1", "b", 2, 2, 2));
    }
    RatingStore reopened(dir / "r.jsonl");
    CHECK(reopened.size() == 2);
    CHECK(reopened.has("t0", "a"));
    CHECK(reopened.snapshot()[0].fluency == 3);
  }

  TEST_CASE("pearson") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> lin, anti;
    for (double v : x) lin.push_back(2 * v + 1), anti.push_back(-v);
    CHECK(*pearson(x, lin) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*pearson(x, anti) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_FALSE(pearson({3, 3, 3}, {1, 2, 3}).has_value());
    CHECK_THROWS_AS(pearson({1, 2}, {1, 2, 3}), DomainError);
    CHECK_THROWS_AS(pearson({1}, {1}), DomainError);
  }

  TEST_CASE("agreement on hand-checkable fixtures") {
    auto tasks = small_tasks(2, 2);
    std::vector<Rating> same;
    for (const auto& t : tasks)
      for (auto who : {"a", "b"}) same.push_back(rate(t.task_id, who, 4, 4, 4));
    auto r = build_agreement_report(same, tasks);
    for (std::size_t p = 0; p < 3; ++p) {
      CHECK(r.delta[p] == 0.0);
      CHECK_FALSE(r.pearson[p].has_value());
    }

    std::vector<Rating> split;
    for (const auto& t : tasks) {
      int v = t.hidden_strata == Strata::kFollow ? 5 : 1;
      for (auto who : {"a", "b"}) split.push_back(rate(t.task_id, who, 3, 3, v));
    }
    auto s = build_agreement_report(split, tasks);
    CHECK(s.follow_means[2] == 5.0);
    CHECK(s.not_follow_means[2] == 1.0);
    CHECK(s.delta[2] == 4.0);
    CHECK(s.pearson[2] == doctest::Approx(1.0));
  }

  TEST_CASE("agreement completeness, partial mode and many annotators") {
    auto tasks = small_tasks(2, 1);
    std::vector<Rating> rs{rate("t0", "a", 5, 5, 5), rate("t1", "a", 4, 4, 4), rate("t2", "a", 1, 1, 1),
                           rate("t0", "b", 5, 5, 5), rate("t1", "b", 3, 3, 3)};
    CHECK_THROWS_AS(build_agreement_report(rs, tasks), ValidationError);
    auto p = build_agreement_report(rs, tasks, AgreementOptions{{}, true});
    CHECK(p.partial);
    CHECK(*p.follow_means[0] == doctest::Approx((5.0 + 3.5) / 2));
    CHECK(*p.not_follow_means[0] == 1.0);

    // Three annotators: mean of the three pairwise correlations.
    std::vector<Rating> three;
    const int a[] = {1, 2, 3}, b[] = {1, 3, 2}, c[] = {3, 2, 1};
    for (int i = 0; i < 3; ++i) {
      auto id = "t" + std::to_string(i);
      three.push_back(rate(id, "a", a[i], 3, 3));
      three.push_back(rate(id, "b", b[i], 3, 3));
      three.push_back(rate(id, "c", c[i], 3, 3));
    }
    auto m = build_agreement_report(three, tasks);
    double ab = 0.5, ac = -1.0, bc = -0.5;
    CHECK(*m.pearson[0] == doctest::Approx((ab + ac + bc) / 3));
    CHECK_FALSE(m.pearson[1].has_value());

    auto single = build_agreement_report({rate("t0", "a", 5, 5, 5), rate("t1", "a", 4, 4, 4), rate("t2", "a", 1, 1, 1)},
                                         tasks);
    CHECK_FALSE(single.pearson[0].has_value());
  }

  TEST_CASE("fixture ratings replay the reference table") {
    auto dir = std::filesystem::path(ENDEVAL_FIXTURE_DIR) / "human_eval";
    auto tasks = load_tasks(dir / "tasks.json");
    auto ratings = load_ratings(dir / "ratings.jsonl");
    REQUIRE(tasks.size() == 45);
    REQUIRE(ratings.size() == 90);
    auto r = build_agreement_report(ratings, tasks);
    CHECK(r.follow_tasks == 25);
    CHECK(r.not_follow_tasks == 20);
    const double follow[] = {4.50, 4.12, 4.10}, not_follow[] = {4.55, 4.10, 3.05}, rs[] = {0.43, 0.19, 0.36};
    for (std::size_t p = 0; p < 3; ++p) {
      CHECK(*r.follow_means[p] == doctest::Approx(follow[p]).epsilon(0.001));
      CHECK(*r.not_follow_means[p] == doctest::Approx(not_follow[p]).epsilon(0.001));
      CHECK(std::abs(*r.pearson[p] - rs[p]) <= 0.005);
    }
    CHECK(*r.delta[2] == doctest::Approx(1.05));
    auto md = render_agreement_markdown(r);
    CHECK(md.find("| Follow | 4.50 | 4.12 | 4.10") != std::string::npos);
    CHECK(md.find("| Not Follow | 4.55 | 4.10 | 3.05") != std::string::npos);
  }

  TEST_CASE("annotation API") {
    ::unsetenv("ENDEVAL_ADMIN_TOKEN");
    auto tasks = small_tasks(2, 1);
    auto store = std::make_shared<RatingStore>();
    LiveService live(tasks, store, ServiceOptions{"admintoken", std::nullopt});
    auto cli = live.client();

    auto list = cli.Get("/api/tasks?annotator=ann1");
    REQUIRE(list);
    CHECK(list->status == 200);
    auto body = json::parse(list->body);
    REQUIRE(body.size() == 3);
    for (const auto& t : body) {
      CHECK(t.size() == 4);
      for (const auto& key : {"task_id", "context", "instruction", "ending"}) CHECK(t.contains(key));
    }
    CHECK(list->body.find("secret-model") == std::string::npos);
    CHECK(list->body.find("Follow") == std::string::npos);
    CHECK(cli.Get("/api/tasks")->status == 400);

    json rating{{"task_id", "t0"}, {"annotator_id", "ann1"}, {"fluency", 4}, {"coherence", 4},
                {"instruction_following", 5}};
    auto posted = cli.Post("/api/ratings", rating.dump(), "application/json");
    REQUIRE(posted);
    CHECK(posted->status == 200);
    CHECK(json::parse(posted->body)["instruction_following"] == 5);

    // A double submit stores one rating.
    CHECK(cli.Post("/api/ratings", rating.dump(), "application/json")->status == 200);
    CHECK(store->size() == 1);

    auto bad = rating;
    bad["fluency"] = 6;
    CHECK(cli.Post("/api/ratings", bad.dump(), "application/json")->status == 422);
    bad = rating;
    bad.erase("coherence");
    CHECK(cli.Post("/api/ratings", bad.dump(), "application/json")->status == 422);
    bad = rating;
    bad["task_id"] = "t99";
    CHECK(cli.Post("/api/ratings", bad.dump(), "application/json")->status == 404);
    CHECK(cli.Post("/api/ratings", "{not json", "application/json")->status == 400);

    auto progress = json::parse(cli.Get("/api/progress?annotator=ann1")->body);
    CHECK(progress["rated"] == 1);
    CHECK(progress["total"] == 3);

    // Rated tasks move to the back.
    auto reordered = json::parse(cli.Get("/api/tasks?annotator=ann1")->body);
    CHECK(reordered.back()["task_id"] == "t0");

    CHECK(cli.Get("/api/export")->status == 401);
    httplib::Headers auth{{"Authorization", "Bearer admintoken"}};
    auto exported = cli.Get("/api/export", auth);
    REQUIRE(exported);
    CHECK(exported->status == 200);
    CHECK(json::parse(exported->body).size() == 1);

    auto page = cli.Get("/instructions");
    CHECK(page->status == 200);
    CHECK(page->body.find("Instruction-following") != std::string::npos);
  }

  TEST_CASE("export is disabled without an admin token") {
    auto store = std::make_shared<RatingStore>();
    LiveService live(small_tasks(1, 0), store, ServiceOptions{});
    auto cli = live.client();
    CHECK(cli.Get("/api/export", httplib::Headers{{"Authorization", "Bearer "}})->status == 403);
  }

  TEST_CASE("concurrent submissions keep one rating per key") {
    auto tasks = small_tasks(10, 10);
    auto store = std::make_shared<RatingStore>();
    LiveService live(tasks, store, ServiceOptions{"t", std::nullopt});
    std::vector<std::thread> clients;
    for (int w = 0; w < 4; ++w)
      clients.emplace_back([&, w] {
        auto cli = live.client();
        for (const auto& t : tasks)
          for (int rep = 0; rep < 2; ++rep) {
            json r{{"task_id", t.task_id}, {"annotator_id", "ann" + std::to_string(w % 2)}, {"fluency", 1 + w},
                   {"coherence", 3}, {"instruction_following", 3}};
            cli.Post("/api/ratings", r.dump(), "application/json");
          }
      });
    for (auto& c : clients) c.join();
    CHECK(store->size() == tasks.size() * 2);
  }
}
