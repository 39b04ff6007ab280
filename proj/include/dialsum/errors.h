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

#ifndef DIALSUM_ERRORS_H_
#define DIALSUM_ERRORS_H_

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace dialsum {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A failure that may succeed if the same call is repeated: transport errors,
// non-200 responses, rate limiting.  `retry_after` carries a server-provided
// delay hint when one was received.
class TransientError : public Error {
 public:
  explicit TransientError(const std::string& what,
                          std::optional<std::chrono::milliseconds> retry_after =
                              std::nullopt)
      : Error(what), retry_after_(retry_after) {}

  std::optional<std::chrono::milliseconds> retry_after() const {
    return retry_after_;
  }

 private:
  std::optional<std::chrono::milliseconds> retry_after_;
};

}  // namespace dialsum

#endif  // DIALSUM_ERRORS_H_
