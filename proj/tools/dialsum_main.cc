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

// Command-line driver for the summarization pipeline.
//
//   dialsum run --config run.json
//   dialsum condense --config run.json --dialogue-id ep01
//   dialsum export-train --config run.json --partition train
//   dialsum sweep --config run.json --k 0,1,3,5,10

#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dialsum/pipeline.h"

namespace {

using dialsum::Stage;

void PrintSummary(const dialsum::RunSummary& s) {
  std::cout << "run directory: " << s.run_dir.string() << "\n"
            << "config hash:   " << s.config_hash << "\n"
            << "dialogues:     " << s.dialogues << "\n";
  for (const auto& st : s.stages) {
    std::cout << "  " << dialsum::StageName(st.stage) << ": " << st.processed
              << " ok, " << st.failed << " failed\n";
  }
  std::cout << "cache: " << s.cache.hits << "/" << s.cache.lookups << " hits\n";
  for (const auto& f : s.failures) {
    std::cerr << "FAILED " << f.dialogue_id << " at "
              << dialsum::StageName(f.stage) << ": " << f.error << "\n";
  }
  if (!s.report.empty()) {
    std::cout << "\n" << dialsum::ReadFile(s.run_dir / "report.txt");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segment, condense, enrich and evaluate long-dialogue summaries"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> dialogue_ids;
  std::string partition = "train";
  std::vector<std::size_t> sweep_ks;

  struct Verb {
    const char* name;
    const char* help;
    std::set<Stage> stages;
  };
  const std::vector<Verb> stage_verbs = {
      {"segment", "Compute similarity curves and semantic breakpoints", {Stage::kSegment}},
      {"split", "Pack segments into budgeted splits", {Stage::kSplit}},
      {"condense", "Generate first-stage summaries and event lists", {Stage::kCondense}},
      {"enrich", "Assemble event list, summary and lead-k input", {Stage::kEnrich}},
      {"summarize", "Run the final summarizer", {Stage::kSummarize}},
      {"evaluate", "Score summaries with ROUGE-1/2/L", {Stage::kEvaluate}},
      {"run", "Run every stage", dialsum::AllStages()},
  };

  std::vector<std::pair<CLI::App*, const Verb*>> commands;
  for (const Verb& v : stage_verbs) {
    CLI::App* cmd = app.add_subcommand(v.name, v.help);
    cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
    cmd->add_option("--dialogue-id", dialogue_ids, "Restrict to these dialogues");
    commands.emplace_back(cmd, &v);
  }
  CLI::App* export_cmd = app.add_subcommand(
      "export-train", "Write (input, target) JSONL for the fine-tuning harness");
  export_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
  export_cmd->add_option("--partition", partition, "train, validation or test")
      ->check(CLI::IsMember({"train", "validation", "test"}));
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Score the lead-k grid over condensed documents");
  sweep_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
  sweep_cmd->add_option("--dialogue-id", dialogue_ids, "Restrict to these dialogues");
  sweep_cmd->add_option("--k", sweep_ks, "Lead counts (default: config lead_k_sweep)")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    dialsum::Pipeline pipeline(dialsum::LoadRunConfig(config_path));
    if (export_cmd->parsed()) {
      auto path = pipeline.ExportTraining(dialsum::ParsePartition(partition));
      std::cout << path.string() << "\n";
      return 0;
    }
    if (sweep_cmd->parsed()) {
      auto upstream = pipeline.Run({Stage::kSegment, Stage::kSplit, Stage::kCondense},
                                   dialogue_ids);
      PrintSummary(upstream);
      const auto& ks = sweep_ks.empty() ? pipeline.config().lead_k_sweep : sweep_ks;
      std::cout << "\n"
                << dialsum::FormatRougeTable(pipeline.RunLeadSweep(ks, dialogue_ids),
                                             "Method");
      return upstream.failures.empty() ? 0 : 2;
    }
    for (const auto& [cmd, verb] : commands) {
      if (!cmd->parsed()) continue;
      auto summary = pipeline.Run(verb->stages, dialogue_ids);
      PrintSummary(summary);
      return summary.failures.empty() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
