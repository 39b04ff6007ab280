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

#ifndef DIALSUM_CACHE_H_
#define DIALSUM_CACHE_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace dialsum {

struct CacheStats {
  std::uint64_t lookups = 0;
  std::uint64_t hits = 0;
  std::uint64_t writes = 0;

  double hit_rate() const {
    return lookups == 0 ? 0.0 : static_cast<double>(hits) / lookups;
  }
};

struct CacheEntryMeta {
  std::string model;
  std::string prompt_name;
  std::string prompt_version;
};

// Content-addressed key over (model identity, prompt version, prompt text,
// input text).  Every component is length-prefixed before hashing so no two
// distinct tuples share a preimage.
std::string CacheKey(std::string_view backend_identity,
                     std::string_view template_version,
                     std::string_view template_text, std::string_view input);

// One JSON file per key under a directory.  Files hold the raw generation
// with a metadata header (model, prompt, timestamp).  Writes go through a
// temporary file and a rename, so readers never see partial entries.  Safe
// for concurrent use.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> Get(const std::string& key);
  void Put(const std::string& key, const std::string& generation,
           const CacheEntryMeta& meta);

  CacheStats stats() const;
  void ResetStats();
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path PathFor(const std::string& key) const;

  std::filesystem::path dir_;
  std::atomic<std::uint64_t> lookups_{0};
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> writes_{0};
};

// Writes `contents` to `path` via a sibling temporary file and rename.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);
// Throws Error when the file cannot be read.
std::string ReadFile(const std::filesystem::path& path);

}  // namespace dialsum

#endif  // DIALSUM_CACHE_H_
