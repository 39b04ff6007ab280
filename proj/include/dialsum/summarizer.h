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

#ifndef DIALSUM_SUMMARIZER_H_
#define DIALSUM_SUMMARIZER_H_

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dialsum/cache.h"
#include "dialsum/condenser.h"
#include "dialsum/corpus.h"
#include "dialsum/retry.h"
#include "json.hpp"

namespace dialsum {

// X' = E, F and the rendered lead-k utterances, joined by single newlines
// with empty sections skipped.  Section lengths are in bytes and make each
// section recoverable from `text`.
struct EnrichedInput {
  std::string dialogue_id;
  std::string text;
  std::size_t k = 0;
  std::size_t event_length = 0;
  std::size_t summary_length = 0;
  std::size_t lead_length = 0;

  bool operator==(const EnrichedInput&) const = default;
};

enum class Section { kEventList, kFirstStage, kLead };

// Throws Error if the condensed document belongs to another dialogue.
EnrichedInput Enrich(const CondensedDoc& condensed, const Dialogue& dialogue,
                     std::size_t k);

std::string_view SectionOf(const EnrichedInput& input, Section section);

// Throws Error when the lengths do not describe `text`.
void ValidateEnriched(const EnrichedInput& input);

nlohmann::ordered_json EnrichedToJson(const EnrichedInput& input);
EnrichedInput EnrichedFromJson(const nlohmann::json& j);

enum class SummarizerMode { kPassthrough, kLlm, kHttpModel };

std::string_view SummarizerModeName(SummarizerMode mode);
SummarizerMode ParseSummarizerMode(std::string_view name);

// The final abstractive summarizer.  Implementations must be safe to call
// concurrently.
class SummarizerBackend {
 public:
  virtual ~SummarizerBackend() = default;
  virtual std::string identity() const = 0;
  virtual SummarizerMode mode() const = 0;
  virtual std::string Summarize(const EnrichedInput& input) = 0;
};

// Returns the F section verbatim.
class PassthroughSummarizer : public SummarizerBackend {
 public:
  std::string identity() const override { return "passthrough"; }
  SummarizerMode mode() const override { return SummarizerMode::kPassthrough; }
  std::string Summarize(const EnrichedInput& input) override;
};

// Zero-shot summary of the whole enriched input by an LLM, cached like the
// condensation calls.
class LlmSummarizer : public SummarizerBackend {
 public:
  LlmSummarizer(std::shared_ptr<LlmBackend> llm, PromptTemplate prompt,
                std::shared_ptr<ResponseCache> cache, CondenseOptions options);
  std::string identity() const override;
  SummarizerMode mode() const override { return SummarizerMode::kLlm; }
  std::string Summarize(const EnrichedInput& input) override;

 private:
  std::shared_ptr<LlmBackend> llm_;
  PromptTemplate prompt_;
  std::shared_ptr<ResponseCache> cache_;
  CondenseOptions options_;
};

// POST {"input": X'} and read {"summary": ...}.
class HttpModelSummarizer : public SummarizerBackend {
 public:
  HttpModelSummarizer(std::string url, RetryPolicy retry = {},
                      Sleeper sleep = RealSleeper());
  std::string identity() const override { return "http-model:" + url_; }
  SummarizerMode mode() const override { return SummarizerMode::kHttpModel; }
  std::string Summarize(const EnrichedInput& input) override;

 private:
  std::string url_;
  RetryPolicy retry_;
  Sleeper sleep_;
};

struct SummarizeResult {
  std::map<std::string, std::string> summaries;
  std::map<std::string, std::string> failures;  // id -> error message
};

// One summary per input.  A failing document is recorded and skipped.
SummarizeResult SummarizeCorpus(const std::vector<EnrichedInput>& inputs,
                                SummarizerBackend& backend,
                                std::size_t parallelism = 4);

}  // namespace dialsum

#endif  // DIALSUM_SUMMARIZER_H_
