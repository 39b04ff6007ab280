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

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <unordered_set>

#include "dialsum/hash.h"
#include "dialsum/parallel.h"

namespace dialsum {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<Stage, 6> kStageOrder = {
    Stage::kSegment,  Stage::kSplit,     Stage::kCondense,
    Stage::kEnrich,   Stage::kSummarize, Stage::kEvaluate};

// Reads keys from one config object and rejects keys nobody asked for.
class ConfigObject {
 public:
  ConfigObject(const json& j, std::string where)
      : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw Error("config " + where_ + " must be an object");
  }

  template <typename T>
  bool Get(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return false;
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw Error("config " + Path(key) + ": " + e.what());
    }
    return true;
  }

  const json* Child(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  std::string Path(const std::string& key) const {
    return where_.empty() ? key : where_ + "." + key;
  }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw Error("unknown config key '" + Path(it.key()) + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::unordered_set<std::string> seen_;
};

fs::path Resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

PromptTemplate ParsePrompt(const json* j, PromptKind kind,
                           const PromptTemplate& fallback,
                           const std::string& where) {
  if (j == nullptr) return fallback;
  ConfigObject obj(*j, where);
  std::string text = fallback.text();
  std::string version = fallback.version();
  const bool has_text = obj.Get("template", text);
  const bool has_version = obj.Get("version", version);
  obj.Finish();
  if (has_text && !has_version) {
    throw Error("config " + where + ": a custom template needs a version");
  }
  return PromptTemplate(kind, std::move(text), std::move(version));
}

ordered_json PromptJson(const PromptTemplate& p) {
  return {{"template", p.text()}, {"version", p.version()}};
}

RetryPolicy PolicyFor(const LlmConfig& llm) {
  RetryPolicy policy;
  policy.max_attempts = llm.max_attempts;
  policy.initial_delay = std::chrono::milliseconds(llm.initial_delay_ms);
  policy.max_delay = std::chrono::milliseconds(llm.max_delay_ms);
  return policy;
}

RetryPolicy PolicyWithAttempts(int attempts) {
  RetryPolicy policy;
  policy.max_attempts = attempts;
  return policy;
}

std::string FileSha(const fs::path& path) {
  try {
    return Sha256Hex(ReadFile(path));
  } catch (const Error&) {
    return "unreadable";
  }
}

std::string DumpArtifact(const ordered_json& j) { return j.dump(2) + "\n"; }

const char* VariantLabel(std::string_view key) {
  if (key == "event_list") return "Event List";
  if (key == "first_stage") return "First-Stage Summary";
  return "Final Summary";
}

}  // namespace

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kSegment:
      return "segment";
    case Stage::kSplit:
      return "split";
    case Stage::kCondense:
      return "condense";
    case Stage::kEnrich:
      return "enrich";
    case Stage::kSummarize:
      return "summarize";
    case Stage::kEvaluate:
      return "evaluate";
  }
  return "segment";
}

Stage ParseStage(std::string_view name) {
  for (Stage s : kStageOrder) {
    if (StageName(s) == name) return s;
  }
  throw Error("unknown stage '" + std::string(name) + "'");
}

std::set<Stage> AllStages() { return {kStageOrder.begin(), kStageOrder.end()}; }

void ValidateRunConfig(const RunConfig& c) {
  if (c.corpus.empty()) throw Error("config: 'corpus' is required");
  if (c.segmentation.l < 1) throw Error("config: segmentation.l must be >= 1");
  if (c.split.budget < 1) throw Error("config: split.M must be >= 1");
  if (c.embedding.dim < 1) throw Error("config: embedding.dim must be >= 1");
  if (c.embedding.backend != "mock-hash" && c.embedding.backend != "http-embed") {
    throw Error("config: unknown embedding backend '" + c.embedding.backend + "'");
  }
  if (c.embedding.backend == "http-embed" && c.embedding.url.empty()) {
    throw Error("config: http-embed needs embedding.url");
  }
  if (c.llm.backend != "mock" && c.llm.backend != "chat") {
    throw Error("config: unknown llm backend '" + c.llm.backend + "'");
  }
  if (c.llm.backend == "chat" &&
      (c.llm.chat.api_base.empty() || c.llm.chat.model.empty())) {
    throw Error("config: chat backend needs llm.api_base and llm.model");
  }
  if (c.llm.max_attempts < 1 || c.embedding.max_attempts < 1 ||
      c.summarizer.max_attempts < 1) {
    throw Error("config: max_attempts must be >= 1");
  }
  if (c.llm.chat.max_tokens < 1) throw Error("config: llm.max_tokens must be >= 1");
  if (c.summarizer.mode == SummarizerMode::kHttpModel && c.summarizer.url.empty()) {
    throw Error("config: http-model summarizer needs summarizer.url");
  }
  if (c.workers < 1) throw Error("config: workers must be >= 1");
}

RunConfig ParseRunConfig(const json& j, const fs::path& base_dir) {
  RunConfig c;
  ConfigObject top(j, "");
  std::string path;
  if (top.Get("corpus", path)) c.corpus = Resolve(base_dir, path);
  c.output_dir = top.Get("output_dir", path) ? Resolve(base_dir, path)
                                             : Resolve(base_dir, "run");
  c.cache_dir = top.Get("cache_dir", path) ? Resolve(base_dir, path)
                                           : Resolve(base_dir, "cache");
  std::vector<std::string> partitions;
  if (top.Get("partitions", partitions)) {
    for (const auto& p : partitions) c.partitions.push_back(ParsePartition(p));
  }

  if (const json* e = top.Child("embedding")) {
    ConfigObject obj(*e, "embedding");
    obj.Get("backend", c.embedding.backend);
    obj.Get("dim", c.embedding.dim);
    obj.Get("url", c.embedding.url);
    obj.Get("batch_size", c.embedding.batch_size);
    obj.Get("parallelism", c.embedding.parallelism);
    obj.Get("max_attempts", c.embedding.max_attempts);
    obj.Finish();
  }
  if (const json* s = top.Child("segmentation")) {
    ConfigObject obj(*s, "segmentation");
    std::string method;
    if (obj.Get("method", method)) c.segmentation.method = ParseSegmentMethod(method);
    obj.Get("w", c.segmentation.w);
    obj.Get("l", c.segmentation.l);
    obj.Finish();
  }
  if (const json* s = top.Child("split")) {
    ConfigObject obj(*s, "split");
    obj.Get("M", c.split.budget);
    std::string unit;
    if (obj.Get("unit", unit)) {
      if (unit == "utterances") {
        c.split.unit = BudgetUnit::kUtterances;
      } else if (unit == "tokens") {
        c.split.unit = BudgetUnit::kTokens;
      } else {
        throw Error("config: split.unit must be 'utterances' or 'tokens'");
      }
    }
    obj.Finish();
  }
  if (const json* p = top.Child("prompts")) {
    ConfigObject obj(*p, "prompts");
    c.first_stage_prompt =
        ParsePrompt(obj.Child("first_stage_summary"), PromptKind::kFirstStageSummary,
                    c.first_stage_prompt, "prompts.first_stage_summary");
    c.event_prompt = ParsePrompt(obj.Child("event_list"), PromptKind::kEventList,
                                 c.event_prompt, "prompts.event_list");
    c.second_stage_prompt = ParsePrompt(
        obj.Child("second_stage_summary"), PromptKind::kSecondStageSummary,
        c.second_stage_prompt, "prompts.second_stage_summary");
    obj.Finish();
  }
  if (const json* l = top.Child("llm")) {
    ConfigObject obj(*l, "llm");
    obj.Get("backend", c.llm.backend);
    obj.Get("mock_lines", c.llm.mock_lines);
    obj.Get("api_base", c.llm.chat.api_base);
    obj.Get("api_key", c.llm.chat.api_key);
    obj.Get("model", c.llm.chat.model);
    obj.Get("temperature", c.llm.chat.temperature);
    obj.Get("max_tokens", c.llm.chat.max_tokens);
    obj.Get("timeout_seconds", c.llm.chat.timeout_seconds);
    obj.Get("max_attempts", c.llm.max_attempts);
    obj.Get("initial_delay_ms", c.llm.initial_delay_ms);
    obj.Get("max_delay_ms", c.llm.max_delay_ms);
    obj.Get("parallelism", c.llm.parallelism);
    obj.Finish();
  }
  top.Get("lead_k", c.lead_k);
  top.Get("lead_k_sweep", c.lead_k_sweep);
  if (const json* s = top.Child("summarizer")) {
    ConfigObject obj(*s, "summarizer");
    std::string mode;
    if (obj.Get("mode", mode)) c.summarizer.mode = ParseSummarizerMode(mode);
    obj.Get("url", c.summarizer.url);
    obj.Get("max_attempts", c.summarizer.max_attempts);
    obj.Finish();
  }
  if (const json* r = top.Child("rouge")) {
    ConfigObject obj(*r, "rouge");
    obj.Get("stemming", c.rouge.stemming);
    obj.Finish();
  }
  top.Get("workers", c.workers);
  top.Finish();
  ValidateRunConfig(c);
  return c;
}

void ApplyEnvironmentOverrides(RunConfig& config) {
  if (const char* v = std::getenv("LLM_API_BASE"); v && *v) config.llm.chat.api_base = v;
  if (const char* v = std::getenv("LLM_API_KEY"); v && *v) config.llm.chat.api_key = v;
  if (const char* v = std::getenv("LLM_MODEL"); v && *v) config.llm.chat.model = v;
}

RunConfig LoadRunConfig(const fs::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw Error("config " + path.string() + " is not valid JSON: " + e.what());
  }
  RunConfig c = ParseRunConfig(j, path.parent_path());
  ApplyEnvironmentOverrides(c);
  ValidateRunConfig(c);
  return c;
}

ordered_json RunConfigToJson(const RunConfig& c) {
  ordered_json j;
  j["corpus"] = c.corpus.string();
  j["output_dir"] = c.output_dir.string();
  j["cache_dir"] = c.cache_dir.string();
  auto& parts = j["partitions"] = ordered_json::array();
  for (Partition p : c.partitions) parts.push_back(std::string(PartitionName(p)));
  j["embedding"] = {{"backend", c.embedding.backend},
                    {"dim", c.embedding.dim},
                    {"url", c.embedding.url},
                    {"batch_size", c.embedding.batch_size},
                    {"parallelism", c.embedding.parallelism},
                    {"max_attempts", c.embedding.max_attempts}};
  j["segmentation"] = {{"method", std::string(SegmentMethodName(c.segmentation.method))},
                       {"w", c.segmentation.w},
                       {"l", c.segmentation.l}};
  j["split"] = {{"unit", c.split.unit == BudgetUnit::kUtterances ? "utterances" : "tokens"},
                {"M", c.split.budget}};
  j["prompts"] = {{"first_stage_summary", PromptJson(c.first_stage_prompt)},
                  {"event_list", PromptJson(c.event_prompt)},
                  {"second_stage_summary", PromptJson(c.second_stage_prompt)}};
  j["llm"] = {{"backend", c.llm.backend},
              {"mock_lines", c.llm.mock_lines},
              {"api_base", c.llm.chat.api_base},
              {"model", c.llm.chat.model},
              {"temperature", c.llm.chat.temperature},
              {"max_tokens", c.llm.chat.max_tokens},
              {"timeout_seconds", c.llm.chat.timeout_seconds},
              {"max_attempts", c.llm.max_attempts},
              {"initial_delay_ms", c.llm.initial_delay_ms},
              {"max_delay_ms", c.llm.max_delay_ms},
              {"parallelism", c.llm.parallelism}};
  j["lead_k"] = c.lead_k;
  j["lead_k_sweep"] = c.lead_k_sweep;
  j["summarizer"] = {{"mode", std::string(SummarizerModeName(c.summarizer.mode))},
                     {"url", c.summarizer.url},
                     {"max_attempts", c.summarizer.max_attempts}};
  j["rouge"] = {{"stemming", c.rouge.stemming}};
  j["workers"] = c.workers;
  return j;
}

std::string ConfigHash(const RunConfig& config) {
  ordered_json j = RunConfigToJson(config);
  for (const char* key : {"corpus", "output_dir", "cache_dir", "workers"}) j.erase(key);
  for (const char* key : {"parallelism", "batch_size", "max_attempts"}) {
    j["embedding"].erase(key);
  }
  for (const char* key : {"parallelism", "max_attempts", "initial_delay_ms",
                          "max_delay_ms", "timeout_seconds"}) {
    j["llm"].erase(key);
  }
  j["summarizer"].erase("max_attempts");
  j["corpus_sha256"] = FileSha(config.corpus);
  return Sha256Hex(j.dump());
}

PipelineBackends MakeBackends(const RunConfig& config) {
  PipelineBackends b;
  if (config.embedding.backend == "http-embed") {
    b.embedding = std::make_shared<HttpEmbedBackend>(
        config.embedding.url, config.embedding.dim,
        PolicyWithAttempts(config.embedding.max_attempts));
  } else {
    b.embedding = std::make_shared<MockHashBackend>(config.embedding.dim);
  }
  b.cache = std::make_shared<ResponseCache>(config.cache_dir);
  if (config.llm.backend == "chat") {
    b.llm = std::make_shared<ChatCompletionBackend>(config.llm.chat);
  } else {
    b.llm = std::make_shared<MockLlmBackend>(config.llm.mock_lines);
  }
  switch (config.summarizer.mode) {
    case SummarizerMode::kPassthrough:
      b.summarizer = std::make_shared<PassthroughSummarizer>();
      break;
    case SummarizerMode::kLlm: {
      CondenseOptions options;
      options.retry = PolicyFor(config.llm);
      b.summarizer = std::make_shared<LlmSummarizer>(
          b.llm, config.second_stage_prompt, b.cache, options);
      break;
    }
    case SummarizerMode::kHttpModel:
      b.summarizer = std::make_shared<HttpModelSummarizer>(
          config.summarizer.url, PolicyWithAttempts(config.summarizer.max_attempts));
      break;
  }
  return b;
}

std::string ArtifactFileName(std::string_view dialogue_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : dialogue_id) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                      (c == '.' && !out.empty());
    if (safe) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    }
  }
  return out + ".json";
}

fs::path ExportTrainingFile(const Corpus& corpus,
                            const std::map<std::string, EnrichedInput>& enriched,
                            Partition partition, const fs::path& out_path) {
  std::vector<const Dialogue*> rows;
  for (const Dialogue& d : corpus.dialogues()) {
    if (d.partition == partition) rows.push_back(&d);
  }
  std::sort(rows.begin(), rows.end(),
            [](const Dialogue* a, const Dialogue* b) { return a->id < b->id; });
  std::string no_input, no_summary;
  for (const Dialogue* d : rows) {
    if (!enriched.count(d->id)) no_input += " " + d->id;
    if (!d->gold_summary) no_summary += " " + d->id;
  }
  if (!no_input.empty() || !no_summary.empty()) {
    std::string msg = "cannot export partition '" +
                      std::string(PartitionName(partition)) + "':";
    if (!no_input.empty()) msg += " no enriched input for" + no_input + ";";
    if (!no_summary.empty()) msg += " no gold summary for" + no_summary + ";";
    msg.pop_back();
    throw PipelineError(msg);
  }
  std::string body;
  for (const Dialogue* d : rows) {
    ordered_json row;
    row["id"] = d->id;
    row["input"] = enriched.at(d->id).text;
    row["target"] = *d->gold_summary;
    body += row.dump() + "\n";
  }
  WriteFileAtomic(out_path, body);
  return out_path;
}

Pipeline::Pipeline(RunConfig config) : Pipeline(config, MakeBackends(config)) {}

Pipeline::Pipeline(RunConfig config, PipelineBackends backends)
    : config_(std::move(config)), backends_(std::move(backends)) {
  ValidateRunConfig(config_);
  if (!backends_.embedding || !backends_.llm || !backends_.summarizer ||
      !backends_.cache) {
    throw Error("pipeline needs embedding, llm, summarizer and cache backends");
  }
  backends_.llm = std::make_shared<ConcurrencyLimitedBackend>(
      backends_.llm, static_cast<std::ptrdiff_t>(config_.llm.parallelism));
  corpus_ = LoadCorpus(config_.corpus);
  config_hash_ = ConfigHash(config_);
}

std::vector<const Dialogue*> Pipeline::Select(
    const std::vector<std::string>& ids) const {
  std::vector<const Dialogue*> out;
  if (!ids.empty()) {
    for (const std::string& id : ids) {
      if (!corpus_.find(id)) throw PipelineError("unknown dialogue id '" + id + "'");
    }
  }
  const std::set<std::string> wanted(ids.begin(), ids.end());
  for (const Dialogue& d : corpus_.dialogues()) {
    if (!config_.partitions.empty() &&
        std::find(config_.partitions.begin(), config_.partitions.end(),
                  d.partition) == config_.partitions.end()) {
      continue;
    }
    if (!wanted.empty() && !wanted.count(d.id)) continue;
    out.push_back(&d);
  }
  return out;
}

fs::path Pipeline::ArtifactPath(Stage stage, std::string_view id) const {
  return config_.output_dir / std::string(StageName(stage)) / ArtifactFileName(id);
}

void Pipeline::WriteArtifact(Stage stage, std::string_view id,
                             const ordered_json& data) const {
  ordered_json envelope;
  envelope["stage"] = std::string(StageName(stage));
  envelope["config_hash"] = config_hash_;
  envelope["dialogue_id"] = std::string(id);
  envelope["data"] = data;
  WriteFileAtomic(ArtifactPath(stage, id), DumpArtifact(envelope));
}

json Pipeline::ReadArtifact(Stage stage, std::string_view id) const {
  const fs::path path = ArtifactPath(stage, id);
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw PipelineError("missing '" + std::string(StageName(stage)) +
                        "' artifact for dialogue '" + std::string(id) + "' (" +
                        path.string() + ")");
  }
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw PipelineError("corrupt artifact " + path.string() + ": " + e.what());
  }
  const std::string hash = j.value("config_hash", "");
  if (hash != config_hash_) {
    throw PipelineError("artifact " + path.string() + " was produced by config " +
                        hash + ", current config is " + config_hash_ +
                        "; re-run the '" + std::string(StageName(stage)) +
                        "' stage");
  }
  if (j.value("dialogue_id", "") != id || j.value("stage", "") != StageName(stage)) {
    throw PipelineError("artifact " + path.string() + " does not describe '" +
                        std::string(StageName(stage)) + "' of '" + std::string(id) + "'");
  }
  return j.at("data");
}

void Pipeline::RequireArtifacts(Stage needed_by, Stage upstream,
                                const std::vector<const Dialogue*>& dialogues) const {
  for (const Dialogue* d : dialogues) {
    try {
      ReadArtifact(upstream, d->id);
    } catch (const PipelineError& e) {
      throw PipelineError("stage '" + std::string(StageName(needed_by)) +
                          "' requires the '" + std::string(StageName(upstream)) +
                          "' stage: " + e.what());
    }
  }
}

namespace {

struct DocState {
  std::optional<SegmentationResult> segmentation;
  std::optional<SplitPlan> plan;
  std::optional<CondensedDoc> condensed;
  std::optional<EnrichedInput> enriched;
  std::optional<std::string> summary;
};

}  // namespace

RunSummary Pipeline::Run(const std::set<Stage>& stages,
                         const std::vector<std::string>& dialogue_ids) {
  using Clock = std::chrono::steady_clock;
  if (stages.empty()) throw PipelineError("no stages requested");
  const std::vector<const Dialogue*> selected = Select(dialogue_ids);
  std::vector<const Dialogue*> scored;
  for (const Dialogue* d : selected) {
    if (d->gold_summary) scored.push_back(d);
  }
  auto requested = [&](Stage s) { return stages.count(s) > 0; };

  static constexpr std::pair<Stage, Stage> kUpstream[] = {
      {Stage::kSplit, Stage::kSegment},     {Stage::kCondense, Stage::kSplit},
      {Stage::kEnrich, Stage::kCondense},   {Stage::kSummarize, Stage::kEnrich},
      {Stage::kEvaluate, Stage::kSummarize}, {Stage::kEvaluate, Stage::kCondense}};
  for (auto [stage, upstream] : kUpstream) {
    if (requested(stage) && !requested(upstream)) {
      RequireArtifacts(stage, upstream, stage == Stage::kEvaluate ? scored : selected);
    }
  }

  fs::create_directories(config_.output_dir);
  backends_.cache->ResetStats();

  std::vector<Stage> per_doc;
  for (Stage s : kStageOrder) {
    if (s != Stage::kEvaluate && requested(s)) per_doc.push_back(s);
  }

  std::mutex stats_mu;
  std::array<StageStats, kStageOrder.size()> stats;
  for (std::size_t i = 0; i < kStageOrder.size(); ++i) stats[i].stage = kStageOrder[i];
  std::vector<DocState> states(selected.size());
  std::vector<std::optional<Failure>> failures(selected.size());

  CondenseOptions condense_options;
  condense_options.retry = PolicyFor(config_.llm);
  condense_options.parallelism = config_.llm.parallelism;
  CurveOptions curve_options{config_.embedding.batch_size, config_.embedding.parallelism};

  auto segmentation_of = [&](const Dialogue& d, DocState& st) -> const SegmentationResult& {
    if (!st.segmentation) {
      st.segmentation = SegmentationFromJson(ReadArtifact(Stage::kSegment, d.id).at("segmentation"));
    }
    return *st.segmentation;
  };
  auto plan_of = [&](const Dialogue& d, DocState& st) -> const SplitPlan& {
    if (!st.plan) st.plan = SplitPlanFromJson(ReadArtifact(Stage::kSplit, d.id));
    return *st.plan;
  };
  auto condensed_of = [&](const Dialogue& d, DocState& st) -> const CondensedDoc& {
    if (!st.condensed) st.condensed = CondensedFromJson(ReadArtifact(Stage::kCondense, d.id));
    return *st.condensed;
  };
  auto enriched_of = [&](const Dialogue& d, DocState& st) -> const EnrichedInput& {
    if (!st.enriched) st.enriched = EnrichedFromJson(ReadArtifact(Stage::kEnrich, d.id));
    return *st.enriched;
  };
  auto summary_of = [&](const Dialogue& d, DocState& st) -> const std::string& {
    if (!st.summary) {
      st.summary = ReadArtifact(Stage::kSummarize, d.id).at("summary").get<std::string>();
    }
    return *st.summary;
  };

  auto run_stage = [&](Stage stage, const Dialogue& d, DocState& st) {
    switch (stage) {
      case Stage::kSegment: {
        SimilarityCurve curve{d.id, {}};
        SegmentationResult seg;
        if (d.size() < 2) {
          seg.dialogue_id = d.id;
          seg.n = d.size();
          seg.method = config_.segmentation.method;
          seg.protect_radius = config_.segmentation.w;
          seg.max_segments = config_.segmentation.l;
        } else {
          curve = ComputeSimilarityCurve(d, *backends_.embedding, curve_options);
          seg = config_.segmentation.method == SegmentMethod::kGreedy
                    ? SelectBreakpointsGreedy(curve, config_.segmentation.w,
                                              config_.segmentation.l)
                    : SelectBreakpointsThreshold(curve);
        }
        ordered_json data;
        data["curve"] = curve.values;
        data["segmentation"] = SegmentationToJson(seg);
        WriteArtifact(stage, d.id, data);
        st.segmentation = std::move(seg);
        break;
      }
      case Stage::kSplit: {
        const SegmentationResult& seg = segmentation_of(d, st);
        SplitPlan plan = config_.split.unit == BudgetUnit::kUtterances
                             ? PlanSplits(seg, config_.split.budget)
                             : PlanSplitsByTokens(seg, d, config_.split.budget);
        WriteArtifact(stage, d.id, SplitPlanToJson(plan));
        st.plan = std::move(plan);
        break;
      }
      case Stage::kCondense: {
        CondensedDoc doc = CondenseDocument(
            d, plan_of(d, st), *backends_.llm, config_.first_stage_prompt,
            config_.event_prompt, *backends_.cache, condense_options);
        WriteArtifact(stage, d.id, CondensedToJson(doc));
        st.condensed = std::move(doc);
        break;
      }
      case Stage::kEnrich: {
        EnrichedInput in = Enrich(condensed_of(d, st), d, config_.lead_k);
        WriteArtifact(stage, d.id, EnrichedToJson(in));
        st.enriched = std::move(in);
        break;
      }
      case Stage::kSummarize: {
        std::string summary = backends_.summarizer->Summarize(enriched_of(d, st));
        ordered_json data;
        data["dialogue_id"] = d.id;
        data["backend"] = backends_.summarizer->identity();
        data["summary"] = summary;
        WriteArtifact(stage, d.id, data);
        st.summary = std::move(summary);
        break;
      }
      case Stage::kEvaluate:
        break;
    }
  };

  ParallelFor(selected.size(), config_.workers, [&](std::size_t i) {
    const Dialogue& d = *selected[i];
    for (Stage stage : per_doc) {
      const auto start = Clock::now();
      bool ok = true;
      try {
        run_stage(stage, d, states[i]);
      } catch (const std::exception& e) {
        failures[i] = Failure{d.id, stage, e.what()};
        ok = false;
      }
      const double seconds =
          std::chrono::duration<double>(Clock::now() - start).count();
      {
        std::lock_guard<std::mutex> lock(stats_mu);
        StageStats& s = stats[static_cast<std::size_t>(stage)];
        s.seconds += seconds;
        (ok ? s.processed : s.failed) += 1;
      }
      if (!ok) break;
    }
  });

  RunSummary summary;
  summary.run_dir = config_.output_dir;
  summary.config_hash = config_hash_;
  summary.dialogues = selected.size();
  for (auto& f : failures) {
    if (f) summary.failures.push_back(std::move(*f));
  }

  if (requested(Stage::kEvaluate)) {
    const auto start = Clock::now();
    std::map<std::string, std::string> refs, finals, events, firsts;
    for (std::size_t i = 0; i < selected.size(); ++i) {
      const Dialogue& d = *selected[i];
      if (!d.gold_summary || failures[i]) continue;
      refs[d.id] = *d.gold_summary;
      finals[d.id] = summary_of(d, states[i]);
      const CondensedDoc& doc = condensed_of(d, states[i]);
      events[d.id] = doc.event_list;
      firsts[d.id] = doc.first_stage;
    }
    summary.report = {{"event_list", EvaluateCorpus(events, refs, config_.rouge)},
                      {"first_stage", EvaluateCorpus(firsts, refs, config_.rouge)},
                      {"summary", EvaluateCorpus(finals, refs, config_.rouge)}};
    ordered_json report;
    report["config_hash"] = config_hash_;
    auto& variants = report["variants"] = ordered_json::object();
    std::vector<std::pair<std::string, RougeReport>> table;
    for (const auto& [name, r] : summary.report) {
      variants[name] = RougeReportToJson(r);
      table.emplace_back(VariantLabel(name), r);
    }
    WriteFileAtomic(config_.output_dir / "report.json", DumpArtifact(report));
    WriteFileAtomic(config_.output_dir / "report.txt", FormatRougeTable(table));
    StageStats& s = stats[static_cast<std::size_t>(Stage::kEvaluate)];
    s.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    s.processed = refs.size();
  }

  for (Stage s : kStageOrder) {
    if (requested(s)) summary.stages.push_back(stats[static_cast<std::size_t>(s)]);
  }
  summary.cache = backends_.cache->stats();

  ordered_json failure_json = ordered_json::array();
  for (const Failure& f : summary.failures) {
    failure_json.push_back({{"dialogue_id", f.dialogue_id},
                            {"stage", std::string(StageName(f.stage))},
                            {"error", f.error}});
  }
  WriteFileAtomic(config_.output_dir / "failures.json", DumpArtifact(failure_json));

  ordered_json manifest;
  manifest["config_hash"] = config_hash_;
  manifest["config"] = RunConfigToJson(config_);
  manifest["dialogues"] = summary.dialogues;
  auto& stage_json = manifest["stages"] = ordered_json::array();
  for (const StageStats& s : summary.stages) {
    stage_json.push_back({{"stage", std::string(StageName(s.stage))},
                          {"seconds", s.seconds},
                          {"processed", s.processed},
                          {"failed", s.failed}});
  }
  manifest["cache"] = {{"lookups", summary.cache.lookups},
                       {"hits", summary.cache.hits},
                       {"writes", summary.cache.writes},
                       {"hit_rate", summary.cache.hit_rate()}};
  manifest["failures"] = summary.failures.size();
  WriteFileAtomic(config_.output_dir / "manifest.json", DumpArtifact(manifest));
  return summary;
}

fs::path Pipeline::ExportTraining(Partition partition) {
  std::map<std::string, EnrichedInput> enriched;
  for (const Dialogue& d : corpus_.dialogues()) {
    if (d.partition != partition) continue;
    std::error_code ec;
    if (!fs::exists(ArtifactPath(Stage::kEnrich, d.id), ec)) continue;
    enriched.emplace(d.id, EnrichedFromJson(ReadArtifact(Stage::kEnrich, d.id)));
  }
  return ExportTrainingFile(
      corpus_, enriched, partition,
      config_.output_dir / "export" / (std::string(PartitionName(partition)) + ".jsonl"));
}

std::vector<std::pair<std::string, RougeReport>> Pipeline::RunLeadSweep(
    const std::vector<std::size_t>& ks, const std::vector<std::string>& dialogue_ids) {
  if (ks.empty()) throw PipelineError("lead-k sweep needs at least one k");
  std::vector<const Dialogue*> scored;
  for (const Dialogue* d : Select(dialogue_ids)) {
    if (d->gold_summary) scored.push_back(d);
  }
  RequireArtifacts(Stage::kEvaluate, Stage::kCondense, scored);
  std::vector<CondensedDoc> condensed;
  condensed.reserve(scored.size());
  for (const Dialogue* d : scored) {
    condensed.push_back(CondensedFromJson(ReadArtifact(Stage::kCondense, d->id)));
  }

  std::vector<std::pair<std::string, RougeReport>> rows;
  ordered_json out;
  out["config_hash"] = config_hash_;
  auto& row_json = out["rows"] = ordered_json::object();
  for (std::size_t k : ks) {
    std::vector<EnrichedInput> inputs;
    for (std::size_t i = 0; i < scored.size(); ++i) {
      inputs.push_back(Enrich(condensed[i], *scored[i], k));
    }
    SummarizeResult result = SummarizeCorpus(inputs, *backends_.summarizer, config_.workers);
    std::map<std::string, std::string> refs;
    for (const Dialogue* d : scored) {
      if (result.summaries.count(d->id)) refs[d->id] = *d->gold_summary;
    }
    RougeReport report = EvaluateCorpus(result.summaries, refs, config_.rouge);
    const std::string name = "Lead-" + std::to_string(k);
    ordered_json r = RougeReportToJson(report);
    r["failures"] = result.failures;
    row_json[name] = std::move(r);
    rows.emplace_back(name, std::move(report));
  }
  WriteFileAtomic(config_.output_dir / "sweep" / "report.json", DumpArtifact(out));
  WriteFileAtomic(config_.output_dir / "sweep" / "report.txt",
                  FormatRougeTable(rows, "Method"));
  return rows;
}

}  // namespace dialsum
