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

#ifndef DIALSUM_EMBEDDER_H_
#define DIALSUM_EMBEDDER_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dialsum/corpus.h"
#include "dialsum/retry.h"

namespace dialsum {

class EmbeddingVector {
 public:
  // Throws Error if `values` is empty or holds a non-finite entry.
  explicit EmbeddingVector(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> values_;
};

// Encodes text into fixed-length vectors.  Implementations must be
// deterministic for a fixed identity and safe to call from several threads.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::string identity() const = 0;
  virtual std::size_t dim() const = 0;
  // One raw vector per text, in order.  Shape is validated by EmbedBatch.
  virtual std::vector<std::vector<double>> Embed(
      std::span<const std::string> texts) = 0;
};

// Feature-hashed unigram counts, L2-normalised.  Tokens are lowercased
// alphanumeric runs; a text with none falls back to its whitespace-separated
// words so that every non-blank text yields a nonzero vector.
class MockHashBackend : public EmbeddingBackend {
 public:
  explicit MockHashBackend(std::size_t dim = 256);
  std::string identity() const override;
  std::size_t dim() const override { return dim_; }
  std::vector<std::vector<double>> Embed(
      std::span<const std::string> texts) override;

 private:
  std::size_t dim_;
};

// POST {"texts": [...]} to an endpoint answering {"vectors": [[...], ...]}.
class HttpEmbedBackend : public EmbeddingBackend {
 public:
  HttpEmbedBackend(std::string url, std::size_t dim, RetryPolicy retry = {},
                   Sleeper sleep = RealSleeper());
  std::string identity() const override { return "http-embed:" + url_; }
  std::size_t dim() const override { return dim_; }
  std::vector<std::vector<double>> Embed(
      std::span<const std::string> texts) override;

 private:
  std::string url_;
  std::size_t dim_;
  RetryPolicy retry_;
  Sleeper sleep_;
};

// Rendered u_{i-1} u_i u_{i+1} joined by single spaces, omitting neighbours
// that fall outside the dialogue.  `i` is 1-based; throws Error when out of
// range.
std::string WindowText(const Dialogue& dialogue, std::size_t i);

// Throws Error on empty input, a count mismatch, or a vector whose dimension
// differs from backend.dim().
std::vector<EmbeddingVector> EmbedBatch(std::span<const std::string> texts,
                                        EmbeddingBackend& backend);

// Clamped to [-1, 1].  Throws Error on dimension mismatch or zero vectors.
double Cosine(const EmbeddingVector& a, const EmbeddingVector& b);

struct SimilarityCurve {
  std::string dialogue_id;
  std::vector<double> values;  // values[j] compares windows j+1 and j+2

  std::size_t utterance_count() const { return values.size() + 1; }
  bool operator==(const SimilarityCurve&) const = default;
};

struct CurveOptions {
  std::size_t batch_size = 32;
  std::size_t parallelism = 4;
};

// Adjacent-window cosine similarities of a dialogue with n >= 2.  Distinct
// window texts are embedded once.
SimilarityCurve ComputeSimilarityCurve(const Dialogue& dialogue,
                                       EmbeddingBackend& backend,
                                       const CurveOptions& options = {});

}  // namespace dialsum

#endif  // DIALSUM_EMBEDDER_H_
