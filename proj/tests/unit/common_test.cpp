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
#include <set>

#include "endeval/common/digest.hpp"
#include "endeval/common/error.hpp"
#include "endeval/common/http.hpp"
#include "endeval/common/jsonl.hpp"
#include "endeval/common/rng.hpp"
#include "endeval/common/text.hpp"
#include "endeval/corpus/source_adapter.hpp"
#include "support/synthetic.hpp"

using namespace endeval;

TEST_SUITE("common") {
  TEST_CASE("whitespace word counting") {
    CHECK(text::word_count("") == 0);
    CHECK(text::word_count("   ") == 0);
    CHECK(text::word_count("one") == 1);
    CHECK(text::word_count("  The cat\tsat\non the mat.  ") == 6);
    CHECK(text::trim("\t a b \n") == "a b");
  }

  TEST_CASE("word tokens keep inner apostrophes") {
    auto t = text::word_tokens("Don't STOP, it's 'fine'!");
    CHECK(t == std::vector<std::string>{"don't", "stop", "it's", "fine"});
  }

  TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("deterministic rng") {
    DeterministicRng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.below(13) == b.below(13));
    DeterministicRng r(1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
      auto v = r.below(5);
      CHECK(v < 5);
      seen.insert(v);
    }
    CHECK(seen.size() == 5);
    std::vector<int> v{1, 2, 3, 4, 5, 6};
    DeterministicRng(3).shuffle(v);
    auto w = std::vector<int>{1, 2, 3, 4, 5, 6};
    DeterministicRng(3).shuffle(w);
    CHECK(v == w);
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<int>{1, 2, 3, 4, 5, 6});
  }

  TEST_CASE("jsonl reader skips blank lines and names the bad line") {
    testing::TempDir dir;
    auto p = dir / "x.jsonl";
    {
      std::ofstream f(p);
      f << "{\"a\":1}\n\n{\"a\":2}\n";
    }
    auto rows = read_jsonl(p);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].index == 1);
    CHECK(rows[1].line == 3);
    {
      std::ofstream f(p);
      f << "{\"a\":1}\n{oops\n";
    }
    CHECK_THROWS_WITH_AS(read_jsonl(p), doctest::Contains(":2"), LoadError);
  }

  TEST_CASE("csv quoting") {
    auto rows = read_csv("a,b,c\n1,\"x, y\",\"say \"\"hi\"\"\"\n2,\"multi\nline\",\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].at("b") == "x, y");
    CHECK(rows[0].at("c") == "say \"hi\"");
    CHECK(rows[1].at("b") == "multi\nline");
    CHECK(rows[1].at("c") == "");
  }

  TEST_CASE("url parsing") {
    auto u = http::parse_url("https://api.example.com/v1/chat/completions");
    CHECK(u.scheme == "https");
    CHECK(u.host == "api.example.com");
    CHECK(u.port == 443);
    CHECK(u.path == "/v1/chat/completions");
    auto v = http::parse_url("http://127.0.0.1:8080");
    CHECK(v.port == 8080);
    CHECK(v.path == "/");
    CHECK_THROWS_AS(http::parse_url("ftp://x"), ConfigError);
    CHECK(http::is_retryable_status(429));
    CHECK(http::is_retryable_status(503));
    CHECK_FALSE(http::is_retryable_status(400));
  }
}
