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

#ifndef DIALSUM_SEGMENTER_H_
#define DIALSUM_SEGMENTER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dialsum/embedder.h"
#include "json.hpp"

namespace dialsum {

enum class SegmentMethod { kGreedy, kThreshold };

std::string_view SegmentMethodName(SegmentMethod m);
SegmentMethod ParseSegmentMethod(std::string_view name);

// Inclusive 1-based utterance range.
struct Range {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  bool operator==(const Range&) const = default;
};

struct SegmentationResult {
  std::string dialogue_id;
  // Strictly increasing, each in [1, n-1]; b means a segment ends after u_b.
  // The final boundary n is implicit.
  std::vector<std::size_t> breakpoints;
  std::size_t n = 0;
  SegmentMethod method = SegmentMethod::kGreedy;
  std::size_t protect_radius = 0;  // w
  std::size_t max_segments = 1;    // l

  bool operator==(const SegmentationResult&) const = default;
};

// Throws Error if breakpoints are unsorted, duplicated or outside [1, n-1].
void ValidateSegmentation(const SegmentationResult& seg);

// Repeatedly cuts at the unprotected position of least similarity (lowest
// index on ties), then protects every position within `protect_radius` of
// it, inclusive.  Stops after max_segments - 1 cuts or when every position is
// protected.
SegmentationResult SelectBreakpointsGreedy(const SimilarityCurve& curve,
                                           std::size_t protect_radius,
                                           std::size_t max_segments);

// Cuts at every position whose similarity is below mean - stddev
// (population standard deviation).
SegmentationResult SelectBreakpointsThreshold(const SimilarityCurve& curve);

// Contiguous ranges covering 1..n, one per segment.
std::vector<Range> SegmentsFromBreakpoints(const SegmentationResult& seg);

nlohmann::ordered_json SegmentationToJson(const SegmentationResult& seg);
SegmentationResult SegmentationFromJson(const nlohmann::json& j);

}  // namespace dialsum

#endif  // DIALSUM_SEGMENTER_H_
