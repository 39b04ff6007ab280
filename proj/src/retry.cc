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

#include "dialsum/retry.h"

#include <algorithm>
#include <mutex>
#include <random>
#include <thread>

namespace dialsum {

Sleeper RealSleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::chrono::milliseconds BackoffDelay(
    const RetryPolicy& policy, int retry,
    std::optional<std::chrono::milliseconds> hint) {
  using std::chrono::milliseconds;
  const double base = static_cast<double>(policy.initial_delay.count());
  const double cap = static_cast<double>(policy.max_delay.count());
  double delay = std::min(cap, base * static_cast<double>(1LL << std::min(retry, 30)));
  if (policy.jitter > 0 && delay > 0) {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard<std::mutex> lock(mu);
    std::uniform_real_distribution<double> dist(0.0, policy.jitter * delay);
    delay += dist(rng);
  }
  milliseconds out(static_cast<long long>(delay));
  if (hint && *hint > out) out = *hint;
  return out;
}

}  // namespace dialsum
