// Copyright 2026 The Dialsum Authors.
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


#include "dialsum/rouge.h"

#include <random>

#include "dialsum/porter_stemmer.h"
#include "doctest.h"
#include "test_support.h"

namespace dialsum {
namespace {

constexpr double kTol = 1e-9;

TEST_CASE("hand-scored pair") {
  const auto t = ScorePair("the cat sat", "the cat ran", {});
  CHECK(t[0].f1 == doctest::Approx(2.0 / 3).epsilon(kTol));
  CHECK(t[1].f1 == doctest::Approx(0.5).epsilon(kTol));
  CHECK(t[2].f1 == doctest::Approx(2.0 / 3).epsilon(kTol));
  CHECK(t[0].precision == doctest::Approx(2.0 / 3).epsilon(kTol));
  CHECK(t[0].recall == doctest::Approx(2.0 / 3).epsilon(kTol));
}

TEST_CASE("identity scores one") {
  for (const char* s : {"a b", "the cat sat on the mat", "Go, go, GO!"}) {
    for (const RougeScore& m : ScorePair(s, s, {})) {
      CHECK(m.precision == doctest::Approx(1.0));
      CHECK(m.recall == doctest::Approx(1.0));
      CHECK(m.f1 == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("counts are clipped") {
  const auto t = ScorePair("a a a", "a", {});
  CHECK(t[0].precision == doctest::Approx(1.0 / 3).epsilon(kTol));
  CHECK(t[0].recall == doctest::Approx(1.0).epsilon(kTol));
  CHECK(t[0].f1 == doctest::Approx(0.5).epsilon(kTol));
}

TEST_CASE("degenerate inputs score zero") {
  const RougeScore zero{};
  CHECK(ScorePair("", "the cat", {})[0] == zero);
  CHECK(ScorePair("the cat", "", {})[2] == zero);
  CHECK(ScorePair("cat", "cat", {})[1] == zero);
  CHECK(ScorePair("dog", "cat", {})[0] == zero);
  CHECK(MakeScore(0, 0).f1 == 0);
  CHECK_THROWS_AS(RougeN({"a"}, {"a"}, 0), Error);
}

TEST_CASE("tokenizer") {
  CHECK(TokenizeForRouge("It's 9PM; Café-time!", false) ==
        std::vector<std::string>{"it", "s", "9pm", "caf", "time"});
  CHECK(TokenizeForRouge("Running dogs", true) ==
        std::vector<std::string>{"run", "dog"});
  CHECK(TokenizeForRouge("  \n", false).empty());
}

std::vector<std::string> RandomTokens(std::mt19937& rng, std::size_t max_len) {
  std::vector<std::string> t(rng() % (max_len + 1));
  for (auto& s : t) s = std::string(1, static_cast<char>('a' + rng() % 4));
  return t;
}

TEST_CASE("lcs matches exhaustive search") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = RandomTokens(rng, 10);
    const auto b = RandomTokens(rng, 10);
    REQUIRE(LcsLength(a, b) == testing::BruteForceLcs(a, b));
  }
}

TEST_CASE("n-gram overlap matches a direct count, and scores are symmetric") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = RandomTokens(rng, 12);
    const auto b = RandomTokens(rng, 12);
    for (std::size_t n : {1, 2, 3}) {
      const auto s = RougeN(a, b, n);
      const std::size_t overlap = testing::BruteForceOverlap(a, b, n);
      if (a.size() >= n && b.size() >= n) {
        REQUIRE(s.precision == doctest::Approx(double(overlap) / (a.size() - n + 1)));
        REQUIRE(s.recall == doctest::Approx(double(overlap) / (b.size() - n + 1)));
      } else {
        REQUIRE(s.f1 == 0);
      }
      const auto r = RougeN(b, a, n);
      REQUIRE(r.precision == s.recall);
      REQUIRE(r.recall == s.precision);
      REQUIRE(r.f1 == doctest::Approx(s.f1));
      REQUIRE(s.f1 >= 0);
      REQUIRE(s.f1 <= 1);
    }
    const auto l = RougeL(a, b), lr = RougeL(b, a);
    REQUIRE(l.f1 == doctest::Approx(lr.f1));
  }
}

TEST_CASE("porter stemmer vocabulary") {
  const std::vector<std::pair<const char*, const char*>> cases{
      {"caresses", "caress"},     {"ponies", "poni"},
      {"ties", "ti"},             {"caress", "caress"},
      {"cats", "cat"},            {"feed", "feed"},
      {"agreed", "agre"},         {"plastered", "plaster"},
      {"bled", "bled"},           {"motoring", "motor"},
      {"sing", "sing"},           {"conflated", "conflat"},
      {"troubled", "troubl"},     {"sized", "size"},
      {"hopping", "hop"},         {"tanned", "tan"},
      {"falling", "fall"},        {"hissing", "hiss"},
      {"fizzed", "fizz"},         {"failing", "fail"},
      {"filing", "file"},         {"happy", "happi"},
      {"sky", "sky"},             {"relational", "relat"},
      {"conditional", "condit"},  {"rational", "ration"},
      {"valenci", "valenc"},      {"hesitanci", "hesit"},
      {"digitizer", "digit"},     {"conformabli", "conform"},
      {"radicalli", "radic"},     {"differentli", "differ"},
      {"vileli", "vile"},         {"analogousli", "analog"},
      {"vietnamization", "vietnam"}, {"predication", "predic"},
      {"operator", "oper"},       {"feudalism", "feudal"},
      {"decisiveness", "decis"},  {"hopefulness", "hope"},
      {"callousness", "callous"}, {"formaliti", "formal"},
      {"sensitiviti", "sensit"},  {"sensibiliti", "sensibl"},
      {"triplicate", "triplic"},  {"formative", "form"},
      {"formalize", "formal"},    {"electriciti", "electr"},
      {"electrical", "electr"},   {"hopeful", "hope"},
      {"goodness", "good"},       {"revival", "reviv"},
      {"allowance", "allow"},     {"inference", "infer"},
      {"airliner", "airlin"},     {"gyroscopic", "gyroscop"},
      {"adjustable", "adjust"},   {"defensible", "defens"},
      {"irritant", "irrit"},      {"replacement", "replac"},
      {"adjustment", "adjust"},   {"dependent", "depend"},
      {"adoption", "adopt"},      {"communism", "commun"},
      {"activate", "activ"},      {"angulariti", "angular"},
      {"homologous", "homolog"},  {"effective", "effect"},
      {"bowdlerize", "bowdler"},  {"probate", "probat"},
      {"rate", "rate"},           {"cease", "ceas"},
      {"controll", "control"},    {"roll", "roll"},
      {"generalizations", "gener"}, {"oscillators", "oscil"},
      {"running", "run"},         {"a", "a"},
      {"is", "is"},               {"logically", "logic"},
  };
  for (const auto& [word, stem] : cases) {
    CHECK_MESSAGE(PorterStem(word) == stem, word);
  }
}

TEST_CASE("stemming changes matches") {
  const auto plain = ScorePair("the boats were sailing", "a boat sails", {false});
  const auto stemmed = ScorePair("the boats were sailing", "a boat sails", {true});
  CHECK(plain[0].f1 == 0);
  CHECK(stemmed[0].f1 > 0);
}

TEST_CASE("corpus evaluation") {
  const std::map<std::string, std::string> pred{{"a", "the cat sat"}, {"b", "x y"}};
  const std::map<std::string, std::string> ref{{"a", "the cat ran"}, {"b", "x y"}};
  const auto report = EvaluateCorpus(pred, ref);
  CHECK(report.per_document.size() == 2);
  CHECK(report.aggregate[0].f1 == doctest::Approx((2.0 / 3 + 1.0) / 2));
  CHECK(report.aggregate[1].f1 == doctest::Approx(0.75));
  const auto j = RougeReportToJson(report);
  CHECK(j["documents"] == 2);
  CHECK(j["per_document"]["b"]["rougeL"]["f1"] == 1.0);
  CHECK(j["config"]["stemming"] == false);

  auto missing = ref;
  missing.erase("b");
  missing["c"] = "z";
  try {
    EvaluateCorpus(pred, missing);
    FAIL("expected a key mismatch");
  } catch (const RougeKeyMismatch& e) {
    const std::string what = e.what();
    CHECK(what.find("missing predictions: c") != std::string::npos);
    CHECK(what.find("missing references: b") != std::string::npos);
  }
}

TEST_CASE("table formatting") {
  const std::map<std::string, std::string> pred{{"a", "the cat sat"}};
  const std::map<std::string, std::string> ref{{"a", "the cat ran"}};
  const auto report = EvaluateCorpus(pred, ref);
  const std::string table = FormatRougeTable({{"Final Summary", report}});
  CHECK(table.find("ROUGE-1") != std::string::npos);
  CHECK(table.find("Final Summary      66.67      50.00      66.67") !=
        std::string::npos);
}

TEST_CASE("rouge worked examples") {
  CHECK(TokenizeForRouge("The cat, sat!", false) ==
        std::vector<std::string>{"the", "cat", "sat"});
  CHECK(TokenizeForRouge("", false).empty());
  for (const auto& m : ScorePair("red blue", "green yellow", {})) CHECK(m == RougeScore{});
  const auto sub = RougeL(TokenizeForRouge("the sat", false),
                          TokenizeForRouge("the cat sat", false));
  CHECK(sub.precision == doctest::Approx(1.0));
  CHECK(sub.recall == doctest::Approx(2.0 / 3));
  const std::map<std::string, std::string> same{{"a", "one two"}, {"b", "three four five"}};
  for (const auto& m : EvaluateCorpus(same, same).aggregate) CHECK(m.f1 == doctest::Approx(1.0));
  const std::map<std::string, std::string> p1{{"a", "the cat sat"}}, r1{{"a", "the cat ran"}};
  const auto single = EvaluateCorpus(p1, r1);
  CHECK(single.aggregate == single.per_document.at("a"));
  CHECK(EvaluateCorpus({}, {}).per_document.empty());
}

}  // namespace
}  // namespace dialsum
