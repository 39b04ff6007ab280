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

#include <random>

#include "dialsum/errors.h"
#include "doctest.h"
#include "test_support.h"

namespace dialsum {
namespace {

SimilarityCurve Curve(std::vector<double> v) { return {"d", std::move(v)}; }

TEST_CASE("greedy hand trace") {
  const auto seg = SelectBreakpointsGreedy(Curve({0.9, 0.2, 0.8, 0.1, 0.7}), 1, 3);
  CHECK(seg.breakpoints == std::vector<std::size_t>{2, 4});
  CHECK(seg.n == 6);
  CHECK(seg.method == SegmentMethod::kGreedy);
}

TEST_CASE("greedy respects the segment cap and radius") {
  const auto curve = Curve({0.5, 0.1, 0.2, 0.3, 0.05, 0.9});
  CHECK(SelectBreakpointsGreedy(curve, 0, 1).breakpoints.empty());
  CHECK(SelectBreakpointsGreedy(curve, 0, 2).breakpoints == std::vector<std::size_t>{5});
  CHECK(SelectBreakpointsGreedy(curve, 0, 3).breakpoints ==
        std::vector<std::size_t>{2, 5});
  // A radius covering the whole curve leaves room for one cut only.
  CHECK(SelectBreakpointsGreedy(curve, 6, 5).breakpoints == std::vector<std::size_t>{5});
}

TEST_CASE("greedy ties go to the earliest position") {
  CHECK(SelectBreakpointsGreedy(Curve({0.3, 0.3, 0.3}), 0, 2).breakpoints ==
        std::vector<std::size_t>{1});
  CHECK(SelectBreakpointsGreedy(Curve({0.3, 0.3, 0.3}), 0, 9).breakpoints ==
        std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("greedy matches step-by-step replay on a value grid") {
  const std::vector<double> grid{-0.5, 0.0, 0.5};
  std::size_t mismatches = 0, cases = 0;
  for (std::size_t len = 1; len <= 7; ++len) {
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      std::vector<double> v;
      for (std::size_t d : digits) v.push_back(grid[d]);
      for (std::size_t w = 0; w <= 3; ++w) {
        for (std::size_t l = 1; l <= 5; ++l) {
          ++cases;
          if (SelectBreakpointsGreedy(Curve(v), w, l).breakpoints !=
              testing::SimulateGreedy(v, w, l)) {
            ++mismatches;
          }
        }
      }
      std::size_t i = 0;
      while (i < len && ++digits[i] == grid.size()) digits[i++] = 0;
      if (i == len) break;
    }
  }
  CHECK(cases > 0);
  CHECK(mismatches == 0);
}

TEST_CASE("greedy output is invariant under increasing transforms") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(1 + rng() % 40);
    for (double& x : v) x = u(rng);
    std::vector<double> t;
    for (double x : v) t.push_back((x + 1.0) * (x + 1.0) / 4.0 - 0.5);
    const std::size_t w = rng() % 4, l = 1 + rng() % 8;
    const auto a = SelectBreakpointsGreedy(Curve(v), w, l);
    const auto b = SelectBreakpointsGreedy(Curve(t), w, l);
    REQUIRE(a.breakpoints == b.breakpoints);
    REQUIRE(a.breakpoints.size() < l);
    for (std::size_t i = 1; i < a.breakpoints.size(); ++i) {
      REQUIRE(a.breakpoints[i] - a.breakpoints[i - 1] > w);
    }
    ValidateSegmentation(a);
  }
}

TEST_CASE("threshold rule") {
  CHECK(SelectBreakpointsThreshold(Curve({1.0, 1.0, -1.0})).breakpoints ==
        std::vector<std::size_t>{3});
  CHECK(SelectBreakpointsThreshold(Curve({0.4, 0.4, 0.4, 0.4})).breakpoints.empty());
  CHECK(SelectBreakpointsThreshold(Curve({0.2})).breakpoints.empty());
  CHECK(SelectBreakpointsThreshold(Curve({0.9, 0.1, 0.9, 0.1})).breakpoints.empty());
  CHECK(SelectBreakpointsThreshold(Curve({0.9, 0.8, 0.9, 0.1, 0.85})).breakpoints ==
        std::vector<std::size_t>{4});
}

TEST_CASE("curve validation") {
  CHECK_THROWS_AS(SelectBreakpointsGreedy(Curve({}), 1, 3), Error);
  CHECK_THROWS_AS(SelectBreakpointsGreedy(Curve({0.5, 1.5}), 1, 3), Error);
  CHECK_THROWS_AS(SelectBreakpointsThreshold(Curve({std::nan("")})), Error);
  CHECK_THROWS_AS(SelectBreakpointsGreedy(Curve({0.5}), 1, 0), Error);
}

TEST_CASE("segments from breakpoints") {
  SegmentationResult seg;
  seg.n = 10;
  seg.breakpoints = {3, 7};
  CHECK(SegmentsFromBreakpoints(seg) ==
        std::vector<Range>{{1, 3}, {4, 7}, {8, 10}});
  seg.breakpoints = {};
  CHECK(SegmentsFromBreakpoints(seg) == std::vector<Range>{{1, 10}});
  seg.breakpoints = {10};
  CHECK_THROWS_AS(SegmentsFromBreakpoints(seg), Error);
  seg.breakpoints = {4, 4};
  CHECK_THROWS_AS(SegmentsFromBreakpoints(seg), Error);
}

TEST_CASE("segments partition the dialogue") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 60);
    for (double& x : v) x = static_cast<double>(rng() % 1000) / 1000.0;
    const auto seg = SelectBreakpointsGreedy(Curve(v), rng() % 3, 1 + rng() % 10);
    const auto ranges = SegmentsFromBreakpoints(seg);
    REQUIRE(ranges.size() == seg.breakpoints.size() + 1);
    std::size_t next = 1;
    for (const auto& r : ranges) {
      REQUIRE(r.start == next);
      REQUIRE(r.end >= r.start);
      next = r.end + 1;
    }
    REQUIRE(next == seg.n + 1);
  }
}

TEST_CASE("segmentation json round trip") {
  const auto seg = SelectBreakpointsGreedy(Curve({0.9, 0.2, 0.8, 0.1, 0.7}), 1, 3);
  const auto j = SegmentationToJson(seg);
  CHECK(j.dump() ==
        R"({"dialogue_id":"d","method":"greedy","w":1,"l":3,"breakpoints":[2,4],"n":6})");
  CHECK(SegmentationFromJson(j) == seg);
  auto bad = j;
  bad["breakpoints"] = {6};
  CHECK_THROWS_AS(SegmentationFromJson(bad), Error);
  CHECK_THROWS_AS(SegmentationFromJson(nlohmann::json{{"n", 3}}), Error);
  CHECK_THROWS_AS(ParseSegmentMethod("random"), Error);
}

TEST_CASE("segmenter worked examples") {
  CHECK(SelectBreakpointsGreedy(Curve({0.9, 0.2, 0.8, 0.1, 0.7}), 1, 1).breakpoints.empty());
  CHECK(SelectBreakpointsGreedy(Curve({0.5, 0.5, 0.5}), 0, 4).breakpoints ==
        std::vector<std::size_t>{1, 2, 3});
  CHECK(SelectBreakpointsThreshold(Curve({0.5, 0.5, 0.5})).breakpoints.empty());
  SegmentationResult seg;
  seg.n = 6;
  seg.breakpoints = {2, 4};
  CHECK(SegmentsFromBreakpoints(seg) == std::vector<Range>{{1, 2}, {3, 4}, {5, 6}});
  seg.n = 3;
  seg.breakpoints = {};
  CHECK(SegmentsFromBreakpoints(seg) == std::vector<Range>{{1, 3}});
  seg.n = 2;
  seg.breakpoints = {1};
  CHECK(SegmentsFromBreakpoints(seg) == std::vector<Range>{{1, 1}, {2, 2}});
}

}  // namespace
}  // namespace dialsum
