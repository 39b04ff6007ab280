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

#ifndef DIALSUM_RETRY_H_
#define DIALSUM_RETRY_H_

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "dialsum/errors.h"

namespace dialsum {

// Raised once every attempt has failed with a TransientError.
class RetryExhaustedError : public Error {
 public:
  RetryExhaustedError(int attempts, const std::string& last_error)
      : Error("all " + std::to_string(attempts) +
              " attempts failed; last error: " + last_error),
        attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_delay{500};
  std::chrono::milliseconds max_delay{30000};
  // Uniform jitter added on top of the exponential delay, as a fraction of it.
  double jitter = 0.25;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Sleeps on the calling thread.
Sleeper RealSleeper();

// Delay before retry number `retry` (0-based).  Exponential in `retry`,
// capped at max_delay, plus jitter; a server hint raises the delay to at
// least the hinted value.
std::chrono::milliseconds BackoffDelay(
    const RetryPolicy& policy, int retry,
    std::optional<std::chrono::milliseconds> hint);

// Calls `fn` until it returns without throwing TransientError or
// `policy.max_attempts` calls have been made.  Any other exception
// propagates immediately.
template <typename Fn>
auto CallWithRetries(Fn&& fn, const RetryPolicy& policy,
                     const Sleeper& sleep = RealSleeper()) {
  const int attempts = policy.max_attempts < 1 ? 1 : policy.max_attempts;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const TransientError& e) {
      if (attempt >= attempts) throw RetryExhaustedError(attempt, e.what());
      sleep(BackoffDelay(policy, attempt - 1, e.retry_after()));
    }
  }
}

}  // namespace dialsum

#endif  // DIALSUM_RETRY_H_
