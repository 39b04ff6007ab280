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


#include "dialsum/pipeline.h"

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_support.h"

namespace dialsum {
namespace {

namespace fs = std::filesystem;

bool Contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string ErrorOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

// Counts calls and refuses any split that mentions `poison`.
class SelectiveLlm : public LlmBackend {
 public:
  explicit SelectiveLlm(std::string poison = "") : poison_(std::move(poison)) {}
  std::string identity() const override { return inner_.identity(); }
  std::string Generate(const GenerationRequest& r) override {
    ++calls;
    if (!poison_.empty() && Contains(r.input, poison_)) throw Error("model refused");
    return inner_.Generate(r);
  }
  std::atomic<int> calls{0};

 private:
  MockLlmBackend inner_;
  std::string poison_;
};

PipelineBackends BackendsWith(const RunConfig& c, std::shared_ptr<LlmBackend> llm) {
  PipelineBackends b = MakeBackends(c);
  b.llm = std::move(llm);
  return b;
}

TEST_CASE("full run writes every artifact") {
  testing::TempDir tmp;
  const RunConfig config = testing::FixtureConfig(tmp.path());
  auto llm = std::make_shared<SelectiveLlm>();
  Pipeline p(config, BackendsWith(config, llm));
  const RunSummary s = p.Run(AllStages());
  CHECK(s.dialogues == 5);
  CHECK(s.failures.empty());
  CHECK(s.stages.size() == 6);
  for (const auto& st : s.stages) {
    CHECK(st.failed == 0);
    CHECK(st.processed == 5);
  }
  for (const Dialogue& d : p.corpus().dialogues()) {
    for (const char* stage : {"segment", "split", "condense", "enrich", "summarize"}) {
      const fs::path f = config.output_dir / stage / ArtifactFileName(d.id);
      REQUIRE(fs::exists(f));
      const auto j = nlohmann::json::parse(ReadFile(f));
      CHECK(j["config_hash"] == p.config_hash());
      CHECK(j["stage"] == stage);
      CHECK(j["dialogue_id"] == d.id);
    }
  }
  for (const char* f : {"report.json", "report.txt", "failures.json", "manifest.json"}) {
    CHECK(fs::exists(config.output_dir / f));
  }
  REQUIRE(s.report.size() == 3);
  CHECK(s.report[2].first == "summary");
  CHECK(s.report[2].second.per_document.size() == 5);
  const std::string table = ReadFile(config.output_dir / "report.txt");
  CHECK(Contains(table, "Event List"));
  CHECK(Contains(table, "First-Stage Summary"));
  CHECK(Contains(table, "Final Summary"));
  const auto manifest = nlohmann::json::parse(ReadFile(config.output_dir / "manifest.json"));
  CHECK(manifest["config_hash"] == p.config_hash());
  CHECK_FALSE(manifest["config"]["llm"].contains("api_key"));

  // Passthrough returns the first-stage summary, so the two variants agree.
  const auto& first = s.report[1].second.aggregate;
  const auto& final_ = s.report[2].second.aggregate;
  for (std::size_t m = 0; m < 3; ++m) CHECK(first[m].f1 == final_[m].f1);

  // Warm condense: every lookup hits, no backend calls.
  const int cold_calls = llm->calls.load();
  CHECK(cold_calls == static_cast<int>(s.cache.lookups));
  const RunSummary warm = p.Run({Stage::kCondense});
  CHECK(llm->calls.load() == cold_calls);
  CHECK(warm.cache.lookups == s.cache.lookups);
  CHECK(warm.cache.hits == warm.cache.lookups);
}

TEST_CASE("stages refuse to run without their inputs") {
  testing::TempDir tmp;
  Pipeline p(testing::FixtureConfig(tmp.path()));
  const std::string e1 = ErrorOf([&] { p.Run({Stage::kEvaluate}); });
  CHECK(Contains(e1, "stage 'evaluate' requires the 'summarize' stage"));
  const std::string e2 = ErrorOf([&] { p.Run({Stage::kCondense}); });
  CHECK(Contains(e2, "stage 'condense' requires the 'split' stage"));
  CHECK(Contains(ErrorOf([&] { p.Run({}); }), "no stages"));
  CHECK(Contains(ErrorOf([&] { p.Run({Stage::kSegment}, {"nope"}); }),
                 "unknown dialogue id 'nope'"));
}

TEST_CASE("stages resume from artifacts of the same config") {
  testing::TempDir tmp;
  RunConfig config = testing::FixtureConfig(tmp.path());
  {
    Pipeline p(config);
    p.Run({Stage::kSegment, Stage::kSplit});
  }
  {
    config.workers = 1;  // runtime knobs do not change the hash
    Pipeline p(config);
    const auto s = p.Run({Stage::kCondense, Stage::kEnrich});
    CHECK(s.failures.empty());
  }
  config.segmentation.w = 3;
  Pipeline changed(config);
  const std::string e = ErrorOf([&] { changed.Run({Stage::kEnrich}); });
  CHECK(Contains(e, "produced by config"));
  CHECK(Contains(e, "re-run the 'condense' stage"));
}

TEST_CASE("a failing dialogue does not stop the others") {
  testing::TempDir tmp;
  const RunConfig config = testing::FixtureConfig(tmp.path());
  // Only the harbor episodes have a speaker named Maya.
  auto llm = std::make_shared<SelectiveLlm>("Maya:");
  Pipeline p(config, BackendsWith(config, llm));
  const RunSummary s = p.Run(AllStages());
  REQUIRE(s.failures.size() == 2);
  for (const Failure& f : s.failures) {
    CHECK(f.stage == Stage::kCondense);
    CHECK(f.dialogue_id.rfind("harbor-", 0) == 0);
    CHECK(Contains(f.error, "model refused"));
  }
  CHECK(s.report[2].second.per_document.size() == 3);
  const auto failures = nlohmann::json::parse(ReadFile(config.output_dir / "failures.json"));
  REQUIRE(failures.size() == 2);
  CHECK(failures[0]["stage"] == "condense");
  CHECK(fs::exists(config.output_dir / "summarize" / "diner-s03e01.json"));
  CHECK_FALSE(fs::exists(config.output_dir / "condense" / "harbor-s01e01.json"));
}

TEST_CASE("dialogue selection") {
  testing::TempDir tmp;
  RunConfig config = testing::FixtureConfig(tmp.path());
  Pipeline one(config);
  CHECK(one.Run({Stage::kSegment}, {"diner-s03e01"}).dialogues == 1);
  CHECK(fs::exists(config.output_dir / "segment" / "diner-s03e01.json"));
  CHECK_FALSE(fs::exists(config.output_dir / "segment" / "harbor-s01e01.json"));
  config.partitions = {Partition::kTrain};
  Pipeline train(config);
  CHECK(train.Run({Stage::kSegment}).dialogues == 3);
}

TEST_CASE("single-utterance and tiny dialogues run end to end") {
  testing::TempDir tmp;
  const fs::path corpus = tmp.path() / "tiny.jsonl";
  {
    std::ofstream out(corpus);
    WriteCorpus(Corpus({MakeDialogue("solo", {{"A", "Just me."}}, "A talks."),
                        MakeDialogue("pair", {{"A", "Hi."}, {"B", "Bye."}}, "They part.")}),
                out);
  }
  RunConfig config = testing::FixtureConfig(tmp.path());
  config.corpus = corpus;
  Pipeline p(config);
  const RunSummary s = p.Run(AllStages());
  CHECK(s.failures.empty());
  const auto split = nlohmann::json::parse(
      ReadFile(config.output_dir / "split" / "solo.json"));
  CHECK(split["data"]["splits"] == nlohmann::json::parse("[[1,1]]"));
  CHECK(s.report[2].second.per_document.size() == 2);
}

TEST_CASE("training export") {
  testing::TempDir tmp;
  const RunConfig config = testing::FixtureConfig(tmp.path());
  Pipeline p(config);
  CHECK_THROWS_AS(p.ExportTraining(Partition::kTrain), PipelineError);
  p.Run({Stage::kSegment, Stage::kSplit, Stage::kCondense, Stage::kEnrich});
  const fs::path path = p.ExportTraining(Partition::kTrain);
  CHECK(path == config.output_dir / "export" / "train.jsonl");
  const std::string first = ReadFile(path);
  p.ExportTraining(Partition::kTrain);
  CHECK(ReadFile(path) == first);

  std::istringstream lines(first);
  std::vector<std::string> ids;
  for (std::string line; std::getline(lines, line);) {
    const auto row = nlohmann::json::parse(line);
    CHECK(row.size() == 3);
    const auto enriched = nlohmann::json::parse(ReadFile(
        config.output_dir / "enrich" / ArtifactFileName(row["id"].get<std::string>())));
    CHECK(row["input"] == enriched["data"]["text"]);
    CHECK(row["target"] == p.corpus().find(row["id"].get<std::string>())->gold_summary);
    ids.push_back(row["id"]);
  }
  CHECK(ids == std::vector<std::string>{"harbor-s01e01", "harbor-s01e02", "station-s02e06"});
}

TEST_CASE("export names rows without a gold summary") {
  testing::TempDir tmp;
  const Corpus corpus({MakeDialogue("b", {{std::nullopt, "x"}}, "gold"),
                       MakeDialogue("a", {{std::nullopt, "y"}})});
  std::map<std::string, EnrichedInput> enriched{{"a", {"a", "in a", 0, 4, 0, 0}},
                                                {"b", {"b", "in b", 0, 4, 0, 0}}};
  const std::string e = ErrorOf([&] {
    ExportTrainingFile(corpus, enriched, Partition::kTrain, tmp.path() / "t.jsonl");
  });
  CHECK(Contains(e, "no gold summary for a"));
  CHECK_FALSE(fs::exists(tmp.path() / "t.jsonl"));
  enriched.erase("b");
  CHECK(Contains(ErrorOf([&] {
          ExportTrainingFile(corpus, enriched, Partition::kTrain, tmp.path() / "t.jsonl");
        }),
        "no enriched input for b"));
  const Corpus ok({MakeDialogue("b", {{std::nullopt, "x"}}, "gold"),
                   MakeDialogue("a", {{std::nullopt, "y"}}, "gold a")});
  enriched["b"] = {"b", "in b", 0, 4, 0, 0};
  ExportTrainingFile(ok, enriched, Partition::kTrain, tmp.path() / "t.jsonl");
  CHECK(ReadFile(tmp.path() / "t.jsonl") ==
        "{\"id\":\"a\",\"input\":\"in a\",\"target\":\"gold a\"}\n"
        "{\"id\":\"b\",\"input\":\"in b\",\"target\":\"gold\"}\n");
}

TEST_CASE("lead sweep") {
  testing::TempDir tmp;
  Pipeline p(testing::FixtureConfig(tmp.path()));
  CHECK_THROWS_AS(p.RunLeadSweep({0, 1}), PipelineError);
  p.Run({Stage::kSegment, Stage::kSplit, Stage::kCondense});
  const auto rows = p.RunLeadSweep({0, 1, 3, 5, 10});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].first == "Lead-0");
  CHECK(rows[4].first == "Lead-10");
  // Passthrough ignores the lead, so every row scores the same.
  for (const auto& [name, r] : rows) {
    CHECK(r.aggregate[0].f1 == rows[0].second.aggregate[0].f1);
  }
  CHECK(Contains(ReadFile(p.config().output_dir / "sweep" / "report.txt"), "Lead-3"));
}

TEST_CASE("config parsing") {
  const fs::path base = "/data/cfg";
  const auto c = ParseRunConfig(nlohmann::json::parse(R"({"corpus": "c.jsonl"})"), base);
  CHECK(c.corpus == "/data/cfg/c.jsonl");
  CHECK(c.output_dir == "/data/cfg/run");
  CHECK(c.cache_dir == "/data/cfg/cache");
  CHECK(c.segmentation.w == 2);
  CHECK(c.segmentation.l == 10);
  CHECK(c.split.budget == 40);
  CHECK(c.lead_k == 5);

  auto err = [&](const char* text) {
    return ErrorOf([&] { ParseRunConfig(nlohmann::json::parse(text), base); });
  };
  CHECK(Contains(err(R"({"corpus": "c", "bogus": 1})"), "unknown config key 'bogus'"));
  CHECK(Contains(err(R"({"corpus": "c", "split": {"N": 3}})"), "'split.N'"));
  CHECK(Contains(err(R"({})"), "'corpus' is required"));
  CHECK(Contains(err(R"({"corpus": "c", "segmentation": {"w": "two"}})"), "segmentation.w"));
  CHECK(Contains(err(R"({"corpus": "c", "prompts": {"event_list": {"template": "E {input}"}}})"),
                 "needs a version"));
  CHECK(Contains(err(R"({"corpus": "c", "prompts": {"event_list": {"template": "E", "version": "x"}}})"),
                 "placeholder"));
  CHECK(Contains(err(R"({"corpus": "c", "llm": {"backend": "chat"}})"), "api_base"));
  CHECK(Contains(err(R"({"corpus": "c", "summarizer": {"mode": "http-model"}})"), "summarizer.url"));
  CHECK(Contains(err(R"({"corpus": "c", "split": {"M": 0}})"), "split.M"));

  const auto custom = ParseRunConfig(
      nlohmann::json::parse(
          R"({"corpus": "/abs/c.jsonl", "prompts": {"event_list": {"template": "E {input}", "version": "e2"}},
              "llm": {"backend": "chat", "api_base": "http://h/v1", "model": "m", "api_key": "secret"}})"),
      base);
  CHECK(custom.corpus == "/abs/c.jsonl");
  CHECK(custom.event_prompt.version() == "e2");
  CHECK(custom.llm.chat.api_key == "secret");
  CHECK_FALSE(Contains(RunConfigToJson(custom).dump(), "secret"));
}

TEST_CASE("config hash") {
  testing::TempDir tmp;
  RunConfig a = testing::FixtureConfig(tmp.path());
  const std::string h = ConfigHash(a);
  CHECK(h.size() == 64);
  RunConfig b = a;
  b.workers = 7;
  b.output_dir = "/elsewhere";
  b.llm.parallelism = 1;
  b.llm.max_attempts = 2;
  CHECK(ConfigHash(b) == h);
  b.split.budget = 9;
  CHECK(ConfigHash(b) != h);
  RunConfig c = a;
  c.llm.mock_lines = 3;
  CHECK(ConfigHash(c) != h);
  // Same settings, different corpus bytes.
  const fs::path copy = tmp.path() / "copy.jsonl";
  fs::copy_file(a.corpus, copy);
  RunConfig d = a;
  d.corpus = copy;
  CHECK(ConfigHash(d) == h);
  std::ofstream(copy, std::ios::app) << "\n";
  CHECK(ConfigHash(d) != h);
}

TEST_CASE("artifact file names") {
  CHECK(ArtifactFileName("harbor-s01e01") == "harbor-s01e01.json");
  CHECK(ArtifactFileName("a/b") == "a%2Fb.json");
  CHECK(ArtifactFileName("..") == "%2E..json");
  CHECK(ArtifactFileName("x y") == "x%20y.json");
  CHECK(ArtifactFileName("a/b") != ArtifactFileName("a%2Fb"));
}

TEST_CASE("stage names") {
  for (Stage s : AllStages()) CHECK(ParseStage(StageName(s)) == s);
  CHECK_THROWS_AS(ParseStage("train"), Error);
}

}  // namespace
}  // namespace dialsum
