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

#ifndef DIALSUM_PORTER_STEMMER_H_
#define DIALSUM_PORTER_STEMMER_H_

#include <string>
#include <string_view>

namespace dialsum {

// Porter (1980) suffix stripping, following the author's reference C
// implementation (including its "bli" -> "ble" and "logi" -> "log" rules).
// Expects a lowercase ASCII word; words of two letters or fewer are returned
// unchanged.
std::string PorterStem(std::string_view word);

}  // namespace dialsum

#endif  // DIALSUM_PORTER_STEMMER_H_
