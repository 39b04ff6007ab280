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

#include "dialsum/segmenter.h"

#include <cmath>
#include <numeric>

namespace dialsum {
namespace {

void CheckCurve(const SimilarityCurve& curve) {
  if (curve.values.empty()) {
    throw Error("similarity curve for '" + curve.dialogue_id + "' is empty");
  }
  for (double v : curve.values) {
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
      throw Error("similarity curve for '" + curve.dialogue_id +
                  "' has a value outside [-1, 1]");
    }
  }
}

}  // namespace

std::string_view SegmentMethodName(SegmentMethod m) {
  return m == SegmentMethod::kGreedy ? "greedy" : "threshold";
}

SegmentMethod ParseSegmentMethod(std::string_view name) {
  if (name == "greedy") return SegmentMethod::kGreedy;
  if (name == "threshold") return SegmentMethod::kThreshold;
  throw Error("unknown segmentation method '" + std::string(name) + "'");
}

void ValidateSegmentation(const SegmentationResult& seg) {
  if (seg.n == 0) throw Error("segmentation with n = 0");
  std::size_t prev = 0;
  for (std::size_t b : seg.breakpoints) {
    if (b <= prev || b >= seg.n) {
      throw Error("invalid breakpoint " + std::to_string(b) + " for n = " +
                  std::to_string(seg.n));
    }
    prev = b;
  }
}

SegmentationResult SelectBreakpointsGreedy(const SimilarityCurve& curve,
                                           std::size_t protect_radius,
                                           std::size_t max_segments) {
  CheckCurve(curve);
  if (max_segments < 1) throw Error("max_segments must be >= 1");
  const std::size_t positions = curve.values.size();

  SegmentationResult seg;
  seg.dialogue_id = curve.dialogue_id;
  seg.n = curve.utterance_count();
  seg.method = SegmentMethod::kGreedy;
  seg.protect_radius = protect_radius;
  seg.max_segments = max_segments;

  std::vector<bool> is_protected(positions, false);
  while (seg.breakpoints.size() + 1 < max_segments) {
    std::size_t best = positions;
    for (std::size_t p = 0; p < positions; ++p) {
      if (is_protected[p]) continue;
      if (best == positions || curve.values[p] < curve.values[best]) best = p;
    }
    if (best == positions) break;
    seg.breakpoints.push_back(best + 1);
    const std::size_t lo = best >= protect_radius ? best - protect_radius : 0;
    const std::size_t hi = std::min(positions - 1, best + protect_radius);
    for (std::size_t q = lo; q <= hi; ++q) is_protected[q] = true;
  }
  std::sort(seg.breakpoints.begin(), seg.breakpoints.end());
  return seg;
}

SegmentationResult SelectBreakpointsThreshold(const SimilarityCurve& curve) {
  CheckCurve(curve);
  const auto& v = curve.values;
  const double count = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / count;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double threshold = mean - std::sqrt(ss / count);

  SegmentationResult seg;
  seg.dialogue_id = curve.dialogue_id;
  seg.n = curve.utterance_count();
  seg.method = SegmentMethod::kThreshold;
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (v[p] < threshold) seg.breakpoints.push_back(p + 1);
  }
  return seg;
}

std::vector<Range> SegmentsFromBreakpoints(const SegmentationResult& seg) {
  ValidateSegmentation(seg);
  std::vector<Range> out;
  out.reserve(seg.breakpoints.size() + 1);
  std::size_t start = 1;
  for (std::size_t b : seg.breakpoints) {
    out.push_back({start, b});
    start = b + 1;
  }
  out.push_back({start, seg.n});
  return out;
}

nlohmann::ordered_json SegmentationToJson(const SegmentationResult& seg) {
  nlohmann::ordered_json j;
  j["dialogue_id"] = seg.dialogue_id;
  j["method"] = std::string(SegmentMethodName(seg.method));
  j["w"] = seg.protect_radius;
  j["l"] = seg.max_segments;
  j["breakpoints"] = seg.breakpoints;
  j["n"] = seg.n;
  return j;
}

SegmentationResult SegmentationFromJson(const nlohmann::json& j) {
  SegmentationResult seg;
  try {
    seg.dialogue_id = j.at("dialogue_id").get<std::string>();
    seg.method = ParseSegmentMethod(j.at("method").get<std::string>());
    seg.protect_radius = j.at("w").get<std::size_t>();
    seg.max_segments = j.at("l").get<std::size_t>();
    seg.breakpoints = j.at("breakpoints").get<std::vector<std::size_t>>();
    seg.n = j.at("n").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed segmentation record: ") + e.what());
  }
  ValidateSegmentation(seg);
  return seg;
}

}  // namespace dialsum
