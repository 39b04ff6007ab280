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

#include "dialsum/embedder.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string_view>

#include "dialsum/http_client.h"
#include "dialsum/parallel.h"

namespace dialsum {
namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> HashTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  if (tokens.empty()) {
    std::istringstream words{std::string(text)};
    for (std::string w; words >> w;) tokens.push_back(w);
  }
  return tokens;
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw Error("embedding vector must have dim >= 1");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error("embedding vector has a non-finite entry");
  }
}

MockHashBackend::MockHashBackend(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw Error("mock-hash dimension must be positive");
}

std::string MockHashBackend::identity() const {
  return "mock-hash/" + std::to_string(dim_);
}

std::vector<std::vector<double>> MockHashBackend::Embed(
    std::span<const std::string> texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    std::vector<double> v(dim_, 0.0);
    for (const std::string& token : HashTokens(text)) {
      v[Fnv1a(token) % dim_] += 1.0;
    }
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (double& x : v) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

HttpEmbedBackend::HttpEmbedBackend(std::string url, std::size_t dim,
                                   RetryPolicy retry, Sleeper sleep)
    : url_(std::move(url)), dim_(dim), retry_(retry), sleep_(std::move(sleep)) {
  if (dim_ == 0) throw Error("http-embed dimension must be positive");
  ParseEndpoint(url_);
}

std::vector<std::vector<double>> HttpEmbedBackend::Embed(
    std::span<const std::string> texts) {
  const Endpoint endpoint = ParseEndpoint(url_);
  nlohmann::json request;
  request["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  nlohmann::json reply = CallWithRetries(
      [&] { return PostJson(endpoint, request); }, retry_, sleep_);
  auto it = reply.find("vectors");
  if (it == reply.end() || !it->is_array()) {
    throw Error("http-embed reply has no 'vectors' array");
  }
  try {
    return it->get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("http-embed reply is not a list of float lists: ") +
                e.what());
  }
}

std::string WindowText(const Dialogue& dialogue, std::size_t i) {
  const std::size_t n = dialogue.size();
  if (i < 1 || i > n) {
    throw Error("window index " + std::to_string(i) + " outside 1.." +
                std::to_string(n));
  }
  const std::size_t first = i == 1 ? 1 : i - 1;
  const std::size_t last = i == n ? n : i + 1;
  std::string out;
  for (std::size_t j = first; j <= last; ++j) {
    if (j > first) out += ' ';
    out += RenderUtterance(dialogue.utterances[j - 1]);
  }
  return out;
}

std::vector<EmbeddingVector> EmbedBatch(std::span<const std::string> texts,
                                        EmbeddingBackend& backend) {
  if (texts.empty()) throw Error("EmbedBatch called with no texts");
  std::vector<std::vector<double>> raw = backend.Embed(texts);
  if (raw.size() != texts.size()) {
    throw Error("embedding backend '" + backend.identity() + "' returned " +
                std::to_string(raw.size()) + " vectors for " +
                std::to_string(texts.size()) + " texts");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(raw.size());
  for (auto& v : raw) {
    if (v.size() != backend.dim()) {
      throw Error("embedding backend '" + backend.identity() +
                  "' dimension mismatch: expected " +
                  std::to_string(backend.dim()) + ", got " +
                  std::to_string(v.size()));
    }
    out.emplace_back(std::move(v));
  }
  return out;
}

double Cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw Error("cosine of vectors with dims " + std::to_string(a.dim()) +
                " and " + std::to_string(b.dim()));
  }
  double dot = 0, na = 0, nb = 0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    dot += av[i] * bv[i];
    na += av[i] * av[i];
    nb += bv[i] * bv[i];
  }
  if (na == 0 || nb == 0) throw Error("cosine undefined for a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

SimilarityCurve ComputeSimilarityCurve(const Dialogue& dialogue,
                                       EmbeddingBackend& backend,
                                       const CurveOptions& options) {
  const std::size_t n = dialogue.size();
  if (n < 2) {
    throw Error("dialogue '" + dialogue.id + "' has " + std::to_string(n) +
                " utterance(s): nothing to segment");
  }
  std::vector<std::string> windows;
  windows.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) windows.push_back(WindowText(dialogue, i));

  // Embed each distinct window once.
  std::map<std::string, std::size_t> slot_of;
  std::vector<std::string> unique;
  std::vector<std::size_t> slot(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = slot_of.emplace(windows[i], unique.size());
    if (inserted) unique.push_back(windows[i]);
    slot[i] = it->second;
  }

  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  const std::size_t batches = (unique.size() + batch - 1) / batch;
  std::vector<std::vector<EmbeddingVector>> results(batches);
  ParallelFor(batches, options.parallelism, [&](std::size_t b) {
    const std::size_t begin = b * batch;
    const std::size_t len = std::min(batch, unique.size() - begin);
    results[b] = EmbedBatch(std::span(unique).subspan(begin, len), backend);
  });
  auto embedding = [&](std::size_t i) -> const EmbeddingVector& {
    return results[slot[i] / batch][slot[i] % batch];
  };

  SimilarityCurve curve;
  curve.dialogue_id = dialogue.id;
  curve.values.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    curve.values.push_back(Cosine(embedding(i), embedding(i + 1)));
  }
  return curve;
}

}  // namespace dialsum
