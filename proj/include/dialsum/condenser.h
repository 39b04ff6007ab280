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

#ifndef DIALSUM_CONDENSER_H_
#define DIALSUM_CONDENSER_H_

#include <atomic>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "dialsum/cache.h"
#include "dialsum/corpus.h"
#include "dialsum/retry.h"
#include "dialsum/splitter.h"
#include "json.hpp"

namespace dialsum {

enum class PromptKind { kFirstStageSummary, kEventList, kSecondStageSummary };

std::string_view PromptKindName(PromptKind kind);

inline constexpr std::string_view kInputPlaceholder = "{input}";

// An instruction with exactly one {input} slot.
class PromptTemplate {
 public:
  // Throws Error unless `text` contains exactly one placeholder.
  PromptTemplate(PromptKind kind, std::string text, std::string version);

  static PromptTemplate DefaultFirstStageSummary();
  static PromptTemplate DefaultEventList();
  static PromptTemplate DefaultSecondStageSummary();

  PromptKind kind() const { return kind_; }
  const std::string& text() const { return text_; }
  const std::string& version() const { return version_; }

 private:
  PromptKind kind_;
  std::string text_;
  std::string version_;
};

// Substitutes the placeholder once; `input` is inserted verbatim even if it
// contains the placeholder itself.
std::string RenderPrompt(const PromptTemplate& prompt, std::string_view input);

struct GenerationRequest {
  std::string prompt;  // the rendered prompt sent to the model
  std::string input;   // the raw split text, for deterministic doubles
};

// A zero-shot text generator.  Implementations throw TransientError for
// failures worth retrying and must be safe to call concurrently.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  // Model name plus every generation parameter that affects output.
  virtual std::string identity() const = 0;
  virtual std::string Generate(const GenerationRequest& request) = 0;
};

// Returns the first `lines` lines of the request input.  Counts calls.
class MockLlmBackend : public LlmBackend {
 public:
  explicit MockLlmBackend(std::size_t lines = 2) : lines_(lines) {}
  std::string identity() const override;
  std::string Generate(const GenerationRequest& request) override;
  std::size_t calls() const { return calls_.load(); }

 private:
  std::size_t lines_;
  std::atomic<std::size_t> calls_{0};
};

struct ChatCompletionConfig {
  std::string api_base;  // e.g. https://api.openai.com/v1
  std::string api_key;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 512;
  int timeout_seconds = 120;
};

// Chat-completions client: one user message, content read from the first
// choice.  429 and 5xx replies surface as TransientError.
class ChatCompletionBackend : public LlmBackend {
 public:
  explicit ChatCompletionBackend(ChatCompletionConfig config);
  std::string identity() const override;
  std::string Generate(const GenerationRequest& request) override;

 private:
  ChatCompletionConfig config_;
};

// Caps the number of in-flight calls to a shared backend.
class ConcurrencyLimitedBackend : public LlmBackend {
 public:
  ConcurrencyLimitedBackend(std::shared_ptr<LlmBackend> inner,
                            std::ptrdiff_t max_in_flight);
  std::string identity() const override { return inner_->identity(); }
  std::string Generate(const GenerationRequest& request) override;

 private:
  std::shared_ptr<LlmBackend> inner_;
  std::counting_semaphore<> slots_;
};

class CondenseError : public Error {
 public:
  using Error::Error;
};

struct CondenseOptions {
  RetryPolicy retry;
  Sleeper sleep = RealSleeper();
  std::size_t parallelism = 4;
};

// Cache lookup, then generation with retries on a miss.  Trailing
// whitespace is stripped; an empty result is an error.  `label` names the
// split in error messages.
std::string CondenseSplit(std::string_view split_text,
                          const PromptTemplate& prompt, LlmBackend& backend,
                          ResponseCache& cache, const CondenseOptions& options,
                          std::string_view label = "split");

struct CondenseProvenance {
  std::string backend;
  std::string summary_prompt_version;
  std::string event_prompt_version;
  std::string split_plan_hash;

  bool operator==(const CondenseProvenance&) const = default;
};

struct CondensedDoc {
  std::string dialogue_id;
  std::vector<std::string> summaries;  // f_i
  std::vector<std::string> events;     // e_i
  std::string first_stage;             // F
  std::string event_list;              // E
  CondenseProvenance provenance;

  bool operator==(const CondensedDoc&) const = default;
};

// Parts joined by a single newline.
std::string JoinParts(const std::vector<std::string>& parts);

// Throws Error unless both part lists have the same length and the joined
// forms match their parts.
void ValidateCondensed(const CondensedDoc& doc);

// First-stage summary and event list for every split, in split order.  Any
// split failure aborts the document; entries already cached stay cached.
CondensedDoc CondenseDocument(const Dialogue& dialogue, const SplitPlan& plan,
                              LlmBackend& backend,
                              const PromptTemplate& summary_prompt,
                              const PromptTemplate& event_prompt,
                              ResponseCache& cache,
                              const CondenseOptions& options = {});

nlohmann::ordered_json CondensedToJson(const CondensedDoc& doc);
CondensedDoc CondensedFromJson(const nlohmann::json& j);

}  // namespace dialsum

#endif  // DIALSUM_CONDENSER_H_
