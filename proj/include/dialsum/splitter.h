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

#ifndef DIALSUM_SPLITTER_H_
#define DIALSUM_SPLITTER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dialsum/corpus.h"
#include "dialsum/segmenter.h"
#include "json.hpp"

namespace dialsum {

enum class BudgetUnit { kUtterances, kTokens };

struct SplitPlan {
  std::string dialogue_id;
  std::size_t n = 0;
  BudgetUnit unit = BudgetUnit::kUtterances;
  std::size_t budget = 1;  // M, in `unit`s
  std::vector<Range> splits;
  // Split ends that are neither a semantic breakpoint nor n.
  std::vector<std::size_t> fallback_cuts;

  bool operator==(const SplitPlan&) const = default;
};

// Packs segments into splits of at most `max_utterances` utterances.  From
// each start, the split ends at the furthest boundary (breakpoint or n)
// that fits; when none fits, the split is cut at exactly start +
// max_utterances - 1 and the cut is recorded as a fallback.
SplitPlan PlanSplits(const SegmentationResult& seg, std::size_t max_utterances);

// Same rule with the budget counted in whitespace tokens of the rendered
// utterances.  A single utterance larger than the budget becomes its own
// split (recorded as a fallback when it is not a boundary).
SplitPlan PlanSplitsByTokens(const SegmentationResult& seg,
                             const Dialogue& dialogue, std::size_t max_tokens);

// Whitespace token count of the rendered utterance.
std::size_t RenderedTokenCount(const Utterance& u);

// One newline-joined rendering per split.  Throws Error if the plan does not
// partition this dialogue.
std::vector<std::string> MaterializeSplits(const Dialogue& dialogue,
                                           const SplitPlan& plan);

// Throws Error unless the splits partition 1..n in order.
void ValidatePlan(const SplitPlan& plan);

nlohmann::ordered_json SplitPlanToJson(const SplitPlan& plan);
SplitPlan SplitPlanFromJson(const nlohmann::json& j);
// Content hash of the plan's canonical JSON, used for provenance.
std::string SplitPlanHash(const SplitPlan& plan);

}  // namespace dialsum

#endif  // DIALSUM_SPLITTER_H_
