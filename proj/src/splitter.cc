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

#include "dialsum/splitter.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "dialsum/hash.h"

namespace dialsum {
namespace {

std::vector<std::size_t> Boundaries(const SegmentationResult& seg) {
  std::vector<std::size_t> out = seg.breakpoints;
  out.push_back(seg.n);
  return out;
}

std::string_view UnitName(BudgetUnit u) {
  return u == BudgetUnit::kUtterances ? "utterances" : "tokens";
}

}  // namespace

SplitPlan PlanSplits(const SegmentationResult& seg, std::size_t max_utterances) {
  ValidateSegmentation(seg);
  if (max_utterances < 1) throw Error("split budget M must be >= 1");
  const std::vector<std::size_t> bounds = Boundaries(seg);

  SplitPlan plan;
  plan.dialogue_id = seg.dialogue_id;
  plan.n = seg.n;
  plan.unit = BudgetUnit::kUtterances;
  plan.budget = max_utterances;

  std::size_t cursor = 0;  // utterances covered so far
  while (cursor < seg.n) {
    const std::size_t limit = std::min(seg.n, cursor + max_utterances);
    // Largest boundary in (cursor, limit].
    auto it = std::upper_bound(bounds.begin(), bounds.end(), limit);
    std::size_t end;
    if (it != bounds.begin() && *std::prev(it) > cursor) {
      end = *std::prev(it);
    } else {
      end = cursor + max_utterances;
      plan.fallback_cuts.push_back(end);
    }
    plan.splits.push_back({cursor + 1, end});
    cursor = end;
  }
  return plan;
}

std::size_t RenderedTokenCount(const Utterance& u) {
  std::istringstream in(RenderUtterance(u));
  std::size_t count = 0;
  for (std::string w; in >> w;) ++count;
  return count;
}

SplitPlan PlanSplitsByTokens(const SegmentationResult& seg,
                             const Dialogue& dialogue, std::size_t max_tokens) {
  ValidateSegmentation(seg);
  if (seg.n != dialogue.size()) {
    throw Error("segmentation n = " + std::to_string(seg.n) +
                " does not match dialogue '" + dialogue.id + "' with " +
                std::to_string(dialogue.size()) + " utterances");
  }
  if (max_tokens < 1) throw Error("token budget must be >= 1");
  const std::vector<std::size_t> bounds = Boundaries(seg);
  const std::set<std::size_t> is_bound(bounds.begin(), bounds.end());

  // prefix[i] = tokens in utterances 1..i
  std::vector<std::size_t> prefix(seg.n + 1, 0);
  for (std::size_t i = 1; i <= seg.n; ++i) {
    prefix[i] = prefix[i - 1] + RenderedTokenCount(dialogue.utterances[i - 1]);
  }

  SplitPlan plan;
  plan.dialogue_id = seg.dialogue_id;
  plan.n = seg.n;
  plan.unit = BudgetUnit::kTokens;
  plan.budget = max_tokens;

  std::size_t cursor = 0;
  while (cursor < seg.n) {
    // Furthest end that fits the budget, at least one utterance.
    std::size_t fit = cursor + 1;
    while (fit < seg.n && prefix[fit + 1] - prefix[cursor] <= max_tokens) ++fit;
    std::size_t end = 0;
    for (std::size_t e = fit; e > cursor; --e) {
      if (is_bound.count(e) && prefix[e] - prefix[cursor] <= max_tokens) {
        end = e;
        break;
      }
    }
    if (end == 0) {
      end = fit;
      if (!is_bound.count(end)) plan.fallback_cuts.push_back(end);
    }
    plan.splits.push_back({cursor + 1, end});
    cursor = end;
  }
  return plan;
}

void ValidatePlan(const SplitPlan& plan) {
  std::size_t expect = 1;
  for (const Range& r : plan.splits) {
    if (r.start != expect || r.end < r.start) {
      throw Error("split plan for '" + plan.dialogue_id +
                  "' is not a contiguous partition");
    }
    expect = r.end + 1;
  }
  if (expect != plan.n + 1) {
    throw Error("split plan for '" + plan.dialogue_id + "' covers " +
                std::to_string(expect - 1) + " of " + std::to_string(plan.n) +
                " utterances");
  }
}

std::vector<std::string> MaterializeSplits(const Dialogue& dialogue,
                                           const SplitPlan& plan) {
  ValidatePlan(plan);
  if (plan.n != dialogue.size() || plan.dialogue_id != dialogue.id) {
    throw Error("split plan for '" + plan.dialogue_id + "' (n = " +
                std::to_string(plan.n) + ") does not match dialogue '" +
                dialogue.id + "' (n = " + std::to_string(dialogue.size()) + ")");
  }
  std::span<const Utterance> all(dialogue.utterances);
  std::vector<std::string> out;
  out.reserve(plan.splits.size());
  for (const Range& r : plan.splits) {
    out.push_back(RenderUtterances(all.subspan(r.start - 1, r.length())));
  }
  return out;
}

nlohmann::ordered_json SplitPlanToJson(const SplitPlan& plan) {
  nlohmann::ordered_json j;
  j["dialogue_id"] = plan.dialogue_id;
  j["n"] = plan.n;
  j["unit"] = std::string(UnitName(plan.unit));
  j["M"] = plan.budget;
  auto& splits = j["splits"] = nlohmann::ordered_json::array();
  for (const Range& r : plan.splits) splits.push_back({r.start, r.end});
  j["fallback_cuts"] = plan.fallback_cuts;
  return j;
}

SplitPlan SplitPlanFromJson(const nlohmann::json& j) {
  SplitPlan plan;
  try {
    plan.dialogue_id = j.at("dialogue_id").get<std::string>();
    plan.n = j.at("n").get<std::size_t>();
    const std::string unit = j.at("unit").get<std::string>();
    if (unit == "utterances") {
      plan.unit = BudgetUnit::kUtterances;
    } else if (unit == "tokens") {
      plan.unit = BudgetUnit::kTokens;
    } else {
      throw Error("unknown split budget unit '" + unit + "'");
    }
    plan.budget = j.at("M").get<std::size_t>();
    for (const auto& r : j.at("splits")) {
      plan.splits.push_back({r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>()});
    }
    plan.fallback_cuts = j.at("fallback_cuts").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed split plan: ") + e.what());
  }
  ValidatePlan(plan);
  return plan;
}

std::string SplitPlanHash(const SplitPlan& plan) {
  return Sha256Hex(SplitPlanToJson(plan).dump());
}

}  // namespace dialsum
