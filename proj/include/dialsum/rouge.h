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

#ifndef DIALSUM_ROUGE_H_
#define DIALSUM_ROUGE_H_

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialsum/errors.h"
#include "json.hpp"

namespace dialsum {

enum class RougeMetric { kRouge1, kRouge2, kRougeL };

std::string_view RougeMetricName(RougeMetric m);

struct RougeScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  bool operator==(const RougeScore&) const = default;
};

// Harmonic mean, 0 when precision + recall == 0.
RougeScore MakeScore(double precision, double recall);

// Lowercase, split on every run of non-[A-Za-z0-9] bytes, drop empties and
// optionally Porter-stem each token.
std::vector<std::string> TokenizeForRouge(std::string_view text, bool stemming);

// Clipped n-gram overlap.  A side with no n-grams scores zero.
RougeScore RougeN(const std::vector<std::string>& candidate,
                  const std::vector<std::string>& reference, std::size_t n);

std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b);

// Whole-sequence LCS, no sentence-level union.
RougeScore RougeL(const std::vector<std::string>& candidate,
                  const std::vector<std::string>& reference);

struct RougeConfig {
  bool stemming = false;
};

inline constexpr std::string_view kRougeTokenizerId = "lower-ascii-alnum-runs";

// Scores for rouge1, rouge2, rougeL, in that order.
using RougeTriple = std::array<RougeScore, 3>;

RougeTriple ScorePair(std::string_view candidate, std::string_view reference,
                      const RougeConfig& config);

struct RougeReport {
  std::map<std::string, RougeTriple> per_document;
  RougeTriple aggregate;  // unweighted means over documents
  RougeConfig config;
};

class RougeKeyMismatch : public Error {
 public:
  using Error::Error;
};

// Both maps must have the same id set; throws RougeKeyMismatch naming the
// ids present on one side only.
RougeReport EvaluateCorpus(const std::map<std::string, std::string>& predictions,
                           const std::map<std::string, std::string>& references,
                           const RougeConfig& config = {});

nlohmann::ordered_json RougeReportToJson(const RougeReport& report);

// Aligned table, one row per variant, F1 x 100 per metric.
std::string FormatRougeTable(
    const std::vector<std::pair<std::string, RougeReport>>& rows,
    std::string_view first_column = "Variant");

}  // namespace dialsum

#endif  // DIALSUM_ROUGE_H_
