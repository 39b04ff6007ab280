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

#ifndef DIALSUM_PIPELINE_H_
#define DIALSUM_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialsum/cache.h"
#include "dialsum/condenser.h"
#include "dialsum/corpus.h"
#include "dialsum/embedder.h"
#include "dialsum/rouge.h"
#include "dialsum/segmenter.h"
#include "dialsum/splitter.h"
#include "dialsum/summarizer.h"
#include "json.hpp"

namespace dialsum {

class PipelineError : public Error {
 public:
  using Error::Error;
};

enum class Stage { kSegment, kSplit, kCondense, kEnrich, kSummarize, kEvaluate };

std::string_view StageName(Stage stage);
Stage ParseStage(std::string_view name);
std::set<Stage> AllStages();

struct EmbeddingConfig {
  std::string backend = "mock-hash";  // mock-hash | http-embed
  std::size_t dim = 256;
  std::string url;
  std::size_t batch_size = 32;
  std::size_t parallelism = 4;
  int max_attempts = 5;
};

struct SegmentationConfig {
  SegmentMethod method = SegmentMethod::kGreedy;
  std::size_t w = 2;
  std::size_t l = 10;
};

struct SplitConfig {
  BudgetUnit unit = BudgetUnit::kUtterances;
  std::size_t budget = 40;  // M
};

struct LlmConfig {
  std::string backend = "mock";  // mock | chat
  std::size_t mock_lines = 2;
  ChatCompletionConfig chat;
  int max_attempts = 5;
  int initial_delay_ms = 500;
  int max_delay_ms = 30000;
  std::size_t parallelism = 4;  // global cap on in-flight LLM calls
};

struct SummarizerConfig {
  SummarizerMode mode = SummarizerMode::kPassthrough;
  std::string url;
  int max_attempts = 5;
};

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path output_dir;
  std::filesystem::path cache_dir;
  std::vector<Partition> partitions;  // empty selects every partition
  EmbeddingConfig embedding;
  SegmentationConfig segmentation;
  SplitConfig split;
  PromptTemplate first_stage_prompt = PromptTemplate::DefaultFirstStageSummary();
  PromptTemplate event_prompt = PromptTemplate::DefaultEventList();
  PromptTemplate second_stage_prompt = PromptTemplate::DefaultSecondStageSummary();
  LlmConfig llm;
  std::size_t lead_k = 5;
  std::vector<std::size_t> lead_k_sweep{0, 1, 3, 5, 10};
  SummarizerConfig summarizer;
  RougeConfig rouge;
  std::size_t workers = 4;
};

// Throws Error on any out-of-range tunable (l >= 1, M >= 1, ...).
void ValidateRunConfig(const RunConfig& config);

// Relative paths are resolved against `base_dir`.  Unknown keys are errors.
RunConfig ParseRunConfig(const nlohmann::json& j,
                         const std::filesystem::path& base_dir);
// Parses the file, then lets LLM_API_BASE, LLM_API_KEY and LLM_MODEL
// override the LLM settings.
RunConfig LoadRunConfig(const std::filesystem::path& path);
void ApplyEnvironmentOverrides(RunConfig& config);

// Effective configuration; the API key is never included.
nlohmann::ordered_json RunConfigToJson(const RunConfig& config);

// Hash of everything that can change an artifact: all tunables, prompts,
// backend settings and the corpus file contents.  Paths, worker counts and
// credentials are excluded.
std::string ConfigHash(const RunConfig& config);

struct PipelineBackends {
  std::shared_ptr<EmbeddingBackend> embedding;
  std::shared_ptr<LlmBackend> llm;
  std::shared_ptr<SummarizerBackend> summarizer;
  std::shared_ptr<ResponseCache> cache;
};

// Builds the backends named by the configuration.
PipelineBackends MakeBackends(const RunConfig& config);

struct StageStats {
  Stage stage;
  double seconds = 0;  // summed over documents
  std::size_t processed = 0;
  std::size_t failed = 0;
};

struct Failure {
  std::string dialogue_id;
  Stage stage;
  std::string error;
};

struct RunSummary {
  std::filesystem::path run_dir;
  std::string config_hash;
  std::size_t dialogues = 0;
  std::vector<StageStats> stages;
  std::vector<Failure> failures;
  CacheStats cache;
  // Present when the evaluate stage ran; rows are the scored variants.
  std::vector<std::pair<std::string, RougeReport>> report;
};

// Writes {"id", "input", "target"} rows for every dialogue of `partition`,
// sorted by id.  Throws PipelineError listing dialogues that lack an
// enriched input or a gold summary.
std::filesystem::path ExportTrainingFile(
    const Corpus& corpus, const std::map<std::string, EnrichedInput>& enriched,
    Partition partition, const std::filesystem::path& out_path);

// Artifact file name for a dialogue id: [A-Za-z0-9._-] kept, every other
// byte percent-encoded.
std::string ArtifactFileName(std::string_view dialogue_id);

// Orchestrates segment -> split -> condense -> enrich -> summarize ->
// evaluate over a corpus.  Layout under the output directory:
//   <stage>/<dialogue>.json   one artifact per dialogue and stage
//   report.json, report.txt   evaluation
//   failures.json             per-dialogue failures of the last run
//   manifest.json             written last
class Pipeline {
 public:
  Pipeline(RunConfig config, PipelineBackends backends);
  // Builds backends from the configuration.
  explicit Pipeline(RunConfig config);

  const RunConfig& config() const { return config_; }
  const std::string& config_hash() const { return config_hash_; }
  const Corpus& corpus() const { return corpus_; }
  const PipelineBackends& backends() const { return backends_; }

  // Runs the requested stages in pipeline order.  Stages not requested are
  // read back from existing artifacts, which must carry this run's config
  // hash.  Per-dialogue failures are recorded and do not stop the run.
  RunSummary Run(const std::set<Stage>& stages,
                 const std::vector<std::string>& dialogue_ids = {});

  // Exports the enriched inputs of one partition to
  // <out>/export/<partition>.jsonl.
  std::filesystem::path ExportTraining(Partition partition);

  // Lead-k grid over existing condense artifacts: enrich, summarize and
  // score once per k.  Writes <out>/sweep/report.{json,txt}.
  std::vector<std::pair<std::string, RougeReport>> RunLeadSweep(
      const std::vector<std::size_t>& ks,
      const std::vector<std::string>& dialogue_ids = {});

 private:
  std::vector<const Dialogue*> Select(const std::vector<std::string>& ids) const;
  std::filesystem::path ArtifactPath(Stage stage, std::string_view id) const;
  void WriteArtifact(Stage stage, std::string_view id,
                     const nlohmann::ordered_json& data) const;
  // Throws PipelineError if missing or produced by another config.
  nlohmann::json ReadArtifact(Stage stage, std::string_view id) const;
  void RequireArtifacts(Stage needed_by, Stage upstream,
                        const std::vector<const Dialogue*>& dialogues) const;

  RunConfig config_;
  PipelineBackends backends_;
  Corpus corpus_;
  std::string config_hash_;
};

}  // namespace dialsum

#endif  // DIALSUM_PIPELINE_H_
