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

#ifndef DIALSUM_HTTP_CLIENT_H_
#define DIALSUM_HTTP_CLIENT_H_

#include <chrono>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"

namespace dialsum {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // always starts with '/'
};

// Splits an http(s) URL into origin and path.  Throws Error on anything that
// is not an http or https URL.
Endpoint ParseEndpoint(std::string_view url);

// POSTs a JSON body and parses the JSON reply.  Transport failures and
// non-200 statuses throw TransientError (429/503 carry Retry-After when the
// server sent one); an unparseable 200 body throws Error.
nlohmann::json PostJson(const Endpoint& endpoint, const nlohmann::json& body,
                        const std::map<std::string, std::string>& headers = {},
                        std::chrono::seconds timeout = std::chrono::seconds(120));

}  // namespace dialsum

#endif  // DIALSUM_HTTP_CLIENT_H_
