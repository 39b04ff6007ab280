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

#include "dialsum/http_client.h"

#include <cstdlib>

#include "dialsum/errors.h"
#include "httplib.h"

namespace dialsum {
namespace {

std::optional<std::chrono::milliseconds> RetryAfter(const httplib::Result& res) {
  if (!res->has_header("Retry-After")) return std::nullopt;
  const std::string value = res->get_header_value("Retry-After");
  char* end = nullptr;
  const double seconds = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || seconds < 0) return std::nullopt;
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000));
}

}  // namespace

Endpoint ParseEndpoint(std::string_view url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error("not an http(s) URL: '" + std::string(url) + "'");
  }
  std::string_view scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error("unsupported URL scheme in '" + std::string(url) + "'");
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  if (path_start == std::string_view::npos) {
    ep.origin = std::string(url);
    ep.path = "/";
  } else {
    ep.origin = std::string(url.substr(0, path_start));
    ep.path = std::string(url.substr(path_start));
  }
  if (ep.origin.size() == scheme_end + 3) {
    throw Error("URL has no host: '" + std::string(url) + "'");
  }
  return ep;
}

nlohmann::json PostJson(const Endpoint& endpoint, const nlohmann::json& body,
                        const std::map<std::string, std::string>& headers,
                        std::chrono::seconds timeout) {
  httplib::Client client(endpoint.origin);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);

  auto res = client.Post(endpoint.path, h, body.dump(), "application/json");
  const std::string target = endpoint.origin + endpoint.path;
  if (!res) {
    throw TransientError("POST " + target + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransientError("POST " + target + " returned HTTP " +
                             std::to_string(res->status),
                         RetryAfter(res));
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("POST " + target + " returned invalid JSON: " + e.what());
  }
}

}  // namespace dialsum
