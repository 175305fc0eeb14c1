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

#include <fstream>
#include <httplib.h>
#include <thread>

#include "endeval/common/error.hpp"
#include "endeval/common/text.hpp"
#include "endeval/corpus/prompt.hpp"
#include "endeval/generation/cache.hpp"
#include "endeval/generation/generator.hpp"
#include "endeval/generation/postprocess.hpp"
#include "support/scripted.hpp"
#include "support/synthetic.hpp"

using namespace endeval;
using namespace std::chrono_literals;

namespace {

GeneratorSpec scripted_spec(const std::string& name = "scripted", int concurrency = 1) {
  GeneratorSpec s;
  s.name = name;
  s.backend = BackendKind::kOracle;  // backend object is injected
  s.concurrency = concurrency;
  return s;
}

struct SleepLog {
  std::vector<std::chrono::milliseconds> sleeps;
  std::mutex mu;
  Sleeper sleeper() {
    return [this](std::chrono::milliseconds d) {
      std::lock_guard lock(mu);
      sleeps.push_back(d);
    };
  }
};

}  // namespace

TEST_SUITE("generation") {
  TEST_CASE("postprocess keeps the first sentence") {
    CHECK(postprocess_ending("  She smiled. Then she left.") == "She smiled.");
    CHECK(postprocess_ending("Ending: He won!  More text") == "He won!");
    CHECK(postprocess_ending("ENDING: ending: It rained?\nYes.") == "It rained?");
    CHECK(postprocess_ending("\"We did it!\" she said. Later.") == "\"We did it!\" she said.");
    CHECK(postprocess_ending("Dr. Smith arrived. Everyone cheered.") == "Dr. Smith arrived.");
    CHECK(postprocess_ending("No terminal punctuation here") == "No terminal punctuation here");
    CHECK(postprocess_ending("Wait... what? ok") == "Wait... what?");
    CHECK(postprocess_ending("Ending:") == "Ending:");
    CHECK_THROWS_AS(postprocess_ending("   \n\t"), GenerationError);
  }

  TEST_CASE("postprocess is idempotent over random text") {
    DeterministicRng rng(42);
    const char* pieces[] = {"Ending: ", "Mr. ", "he ran", ". ", "! ", "?", "\"", ")", " ", "\n", "wow", "...",
                            "St. Louis", "e.g.", "3.5 km", "end", ":", "ending:"};
    for (int i = 0; i < 2000; ++i) {
      std::string raw;
      auto len = 1 + rng.below(12);
      for (std::uint64_t k = 0; k < len; ++k) raw += pieces[rng.below(std::size(pieces))];
      if (text::is_blank(raw)) continue;
      auto once = postprocess_ending(raw);
      CHECK_MESSAGE(postprocess_ending(once) == once, "raw: [" << raw << "]");
      CHECK_FALSE(text::is_blank(once));
    }
  }

  TEST_CASE("retries transient failures with exponential backoff") {
    auto backend = std::make_shared<testing::ScriptedBackend>(testing::flaky_gold(2));
    SleepLog log;
    Generator gen(scripted_spec(), backend, std::make_shared<GenerationCache>(), log.sleeper());
    auto story = testing::synthetic_corpus(1, 3)[0];
    auto r = gen.generate_ending(story, render_prompt(PromptSpec::for_instance(story, 10)));
    CHECK(r.attempt == 3);
    CHECK(r.ending == story.gold_ending());
    CHECK(gen.backend_calls() == 3);
    REQUIRE(log.sleeps.size() == 2);
    CHECK(log.sleeps[0] == 500ms);
    CHECK(log.sleeps[1] == 1000ms);
  }

  TEST_CASE("gives up after max attempts and never retries permanent errors") {
    SleepLog log;
    auto always = std::make_shared<testing::ScriptedBackend>(testing::flaky_gold(100));
    auto spec = scripted_spec();
    spec.retry.max_attempts = 4;
    Generator gen(spec, always, std::make_shared<GenerationCache>(), log.sleeper());
    auto story = testing::synthetic_corpus(1, 3)[0];
    CHECK_THROWS_AS(gen.generate_ending(story, "p"), BackendError);
    CHECK(always->calls() == 4);

    auto permanent = std::make_shared<testing::ScriptedBackend>(
        [](const GenerationRequest&, int) -> std::string { throw BackendError("HTTP 400", false); });
    Generator gen2(scripted_spec(), permanent, std::make_shared<GenerationCache>(), log.sleeper());
    CHECK_THROWS_AS(gen2.generate_ending(story, "p"), BackendError);
    CHECK(permanent->calls() == 1);
  }

  TEST_CASE("backoff delay is capped") {
    RetryPolicy p;
    CHECK(p.delay_before(2) == 500ms);
    CHECK(p.delay_before(3) == 1000ms);
    CHECK(p.delay_before(20) == p.max_backoff);
  }

  TEST_CASE("collect mode keeps going and ledgers the failure") {
    auto corpus = testing::synthetic_corpus(5, 8);
    const auto bad = corpus[2].id;
    auto backend = std::make_shared<testing::ScriptedBackend>([bad](const GenerationRequest& r, int) -> std::string {
      if (r.instance->id == bad) throw BackendError("model refused", false);
      return r.instance->gold_ending() + " Extra sentence.";
    });
    Generator gen(scripted_spec("g", 3), backend, std::make_shared<GenerationCache>(), [](auto) {});
    auto out = gen.batch_generate(corpus, 10, FailurePolicy::kCollect);
    REQUIRE(out.records.size() == 4);
    REQUIRE(out.errors.size() == 1);
    CHECK(out.errors[0].index == 2);
    CHECK(out.errors[0].instance_id == bad);
    CHECK(out.records[2].instance_id == corpus[3].id);
    CHECK(out.records[0].ending == corpus[0].gold_ending());

    Generator strict(scripted_spec("g2", 1), backend, std::make_shared<GenerationCache>(), [](auto) {});
    CHECK_THROWS_AS(strict.batch_generate(corpus, 10, FailurePolicy::kFailFast), BackendError);
  }

  TEST_CASE("concurrent batch preserves input order") {
    auto corpus = testing::synthetic_corpus(64, 4);
    auto backend = std::make_shared<testing::ScriptedBackend>([](const GenerationRequest& r, int) {
      std::this_thread::sleep_for(std::chrono::microseconds(100 * (r.instance->id.size() % 7)));
      return "Ending for " + r.instance->id + ".";
    });
    Generator gen(scripted_spec("par", 8), backend);
    auto out = gen.batch_generate(corpus, std::nullopt);
    REQUIRE(out.records.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(out.records[i].instance_id == corpus[i].id);
  }

  TEST_CASE("cache hit makes no backend call and persists across reopen") {
    testing::TempDir dir;
    auto corpus = testing::synthetic_corpus(10, 5);
    auto backend = std::make_shared<testing::ScriptedBackend>(testing::flaky_gold(0));
    {
      auto cache = std::make_shared<GenerationCache>(dir / "cache.jsonl");
      Generator gen(scripted_spec(), backend, cache);
      gen.batch_generate(corpus, 15);
      CHECK(backend->calls() == 10);
      gen.batch_generate(corpus, 15);
      CHECK(backend->calls() == 10);
      // A different prompt is a different key.
      gen.batch_generate(corpus, 10);
      CHECK(backend->calls() == 20);
    }
    auto reopened = std::make_shared<GenerationCache>(dir / "cache.jsonl");
    CHECK(reopened->size() == 20);
    Generator gen(scripted_spec(), backend, reopened);
    gen.batch_generate(corpus, 15);
    CHECK(backend->calls() == 20);
  }

  TEST_CASE("torn trailing cache line is truncated, damage elsewhere is an error") {
    testing::TempDir dir;
    GenerationRecord r{"i1", "g", "h", "p", "raw", "raw", "2024-01-01T00:00:00Z", 1};
    {
      GenerationCache c(dir / "c.jsonl");
      c.put(r);
      r.instance_id = "i2";
      c.put(r);
    }
    {
      std::ofstream f(dir / "c.jsonl", std::ios::app);
      f << "{\"instance_id\":\"i3\",\"gener";
    }
    GenerationCache c(dir / "c.jsonl");
    CHECK(c.size() == 2);
    CHECK(c.truncated_bytes() > 0);
    CHECK(c.find("i2", "g", "h").has_value());
    GenerationCache again(dir / "c.jsonl");
    CHECK(again.truncated_bytes() == 0);

    {
      std::ofstream f(dir / "bad.jsonl");
      f << "{broken\n" << to_json(r).dump() << "\n";
    }
    CHECK_THROWS_AS(GenerationCache(dir / "bad.jsonl"), LoadError);
  }

  TEST_CASE("fixture and oracle backends") {
    testing::TempDir dir;
    auto story = testing::synthetic_corpus(1, 1)[0];
    {
      std::ofstream f(dir / "fx.jsonl");
      f << json{{"instance_id", story.id}, {"output", "Ending: It was fine. And more."}}.dump() << "\n";
    }
    GeneratorSpec spec;
    spec.name = "fx";
    spec.backend = BackendKind::kFixture;
    spec.endpoint_or_checkpoint = (dir / "fx.jsonl").string();
    Generator gen(spec, std::shared_ptr<TextBackend>(make_backend(spec)));
    auto r = gen.generate_ending(story, "prompt");
    CHECK(r.raw_output == "Ending: It was fine. And more.");
    CHECK(r.ending == "It was fine.");
    auto other = story;
    other.id = "unknown";
    CHECK_THROWS_AS(gen.generate_ending(other, "prompt"), BackendError);

    OracleBackend oracle;
    CHECK(oracle.complete({&story, "x"}) == story.gold_ending());
  }

  TEST_CASE("remote api backend speaks chat completions") {
    httplib::Server server;
    std::atomic<int> hits{0};
    json seen;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
      if (hits++ == 0) {
        res.status = 429;
        res.set_content("{\"error\":\"slow down\"}", "application/json");
        return;
      }
      seen = json::parse(req.body);
      seen["auth"] = req.get_header_value("Authorization");
      res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"They escaped. Finally."}}]})",
                      "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    ::setenv("ENDEVAL_TEST_KEY", "sekret", 1);
    GeneratorSpec spec;
    spec.name = "remote";
    spec.backend = BackendKind::kRemoteApi;
    spec.endpoint_or_checkpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    spec.remote.model = "test-model";
    spec.remote.auth_env = "ENDEVAL_TEST_KEY";
    spec.decode_params = json{{"temperature", 0}};
    Generator gen(spec, std::shared_ptr<TextBackend>(make_backend(spec)), std::make_shared<GenerationCache>(),
                  [](auto) {});
    auto story = testing::synthetic_corpus(1, 2)[0];
    auto r = gen.generate_ending(story, "the prompt");
    server.stop();
    t.join();

    CHECK(r.attempt == 2);
    CHECK(r.ending == "They escaped.");
    CHECK(seen["model"] == "test-model");
    CHECK(seen["temperature"] == 0);
    CHECK(seen["messages"][0]["content"] == "the prompt");
    CHECK(seen["auth"] == "Bearer sekret");
  }

  TEST_CASE("local command backend pipes the prompt through a process") {
    GeneratorSpec spec;
    spec.name = "local";
    spec.backend = BackendKind::kLocalCheckpoint;
    spec.endpoint_or_checkpoint = "/ckpt";
    spec.command = "sed -n '$p' | tr a-z A-Z; echo ' from {checkpoint}'";
    auto backend = make_backend(spec);
    auto out = backend->complete({nullptr, "line one\nending: done"});
    CHECK(out.find("ENDING: DONE") != std::string::npos);
    CHECK(out.find("from /ckpt") != std::string::npos);
  }

  TEST_CASE("generator spec fingerprints track decoding parameters") {
    auto a = scripted_spec();
    auto b = a;
    b.decode_params = json{{"temperature", 0.7}};
    CHECK(a.fingerprint() != b.fingerprint());
    CHECK(generator_spec_from_json(to_json(b)).fingerprint() == b.fingerprint());
    auto bad = to_json(a);
    bad["backend"] = "fixture";
    CHECK_THROWS_AS(generator_spec_from_json(bad), ConfigError);
  }
}
