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

#include "dialsum/cache.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <thread>

#include "dialsum/errors.h"
#include "dialsum/hash.h"
#include "json.hpp"

namespace dialsum {
namespace {

void AppendField(std::string& out, std::string_view field) {
  out += std::to_string(field.size());
  out += ':';
  out += field;
}

std::string UtcTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string CacheKey(std::string_view backend_identity,
                     std::string_view template_version,
                     std::string_view template_text, std::string_view input) {
  std::string preimage = "dialsum-llm-cache-v1|";
  AppendField(preimage, backend_identity);
  AppendField(preimage, template_version);
  AppendField(preimage, Sha256Hex(template_text));
  AppendField(preimage, Sha256Hex(input));
  return Sha256Hex(preimage);
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  thread_local std::mt19937_64 rng{std::random_device{}() ^
                                   std::hash<std::thread::id>{}(
                                       std::this_thread::get_id())};
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(rng());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ResponseCache::PathFor(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<std::string> ResponseCache::Get(const std::string& key) {
  ++lookups_;
  const auto path = PathFor(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  nlohmann::json entry;
  try {
    entry = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;  // treated as a miss; the next Put replaces it
  }
  auto it = entry.find("generation");
  if (it == entry.end() || !it->is_string() || entry.value("key", "") != key) {
    return std::nullopt;
  }
  ++hits_;
  return it->get<std::string>();
}

void ResponseCache::Put(const std::string& key, const std::string& generation,
                        const CacheEntryMeta& meta) {
  nlohmann::ordered_json entry;
  entry["key"] = key;
  entry["model"] = meta.model;
  entry["prompt_name"] = meta.prompt_name;
  entry["prompt_version"] = meta.prompt_version;
  entry["timestamp"] = UtcTimestamp();
  entry["generation"] = generation;
  WriteFileAtomic(PathFor(key), entry.dump(2) + "\n");
  ++writes_;
}

CacheStats ResponseCache::stats() const {
  return {lookups_.load(), hits_.load(), writes_.load()};
}

void ResponseCache::ResetStats() {
  lookups_ = 0;
  hits_ = 0;
  writes_ = 0;
}

}  // namespace dialsum
