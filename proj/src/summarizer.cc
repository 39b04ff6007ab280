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

#include "dialsum/summarizer.h"

#include <mutex>

#include "dialsum/http_client.h"
#include "dialsum/parallel.h"

namespace dialsum {

EnrichedInput Enrich(const CondensedDoc& condensed, const Dialogue& dialogue,
                     std::size_t k) {
  if (condensed.dialogue_id != dialogue.id) {
    throw Error("condensed doc '" + condensed.dialogue_id +
                "' does not belong to dialogue '" + dialogue.id + "'");
  }
  const std::string lead = RenderUtterances(Lead(k, dialogue));
  EnrichedInput out;
  out.dialogue_id = dialogue.id;
  out.k = k;
  out.event_length = condensed.event_list.size();
  out.summary_length = condensed.first_stage.size();
  out.lead_length = lead.size();
  for (const std::string* part : {&condensed.event_list, &condensed.first_stage, &lead}) {
    if (part->empty()) continue;
    if (!out.text.empty()) out.text += '\n';
    out.text += *part;
  }
  return out;
}

std::string_view SectionOf(const EnrichedInput& input, Section section) {
  const std::size_t lengths[3] = {input.event_length, input.summary_length,
                                  input.lead_length};
  std::size_t offset = 0;
  bool first = true;
  for (std::size_t s = 0; s < 3; ++s) {
    if (lengths[s] > 0) {
      if (!first) ++offset;
      first = false;
    }
    if (s == static_cast<std::size_t>(section)) {
      return std::string_view(input.text).substr(offset, lengths[s]);
    }
    offset += lengths[s];
  }
  return {};
}

void ValidateEnriched(const EnrichedInput& input) {
  std::size_t expected = 0;
  std::size_t nonempty = 0;
  for (std::size_t len : {input.event_length, input.summary_length, input.lead_length}) {
    expected += len;
    if (len > 0) ++nonempty;
  }
  if (nonempty > 1) expected += nonempty - 1;
  if (expected != input.text.size()) {
    throw Error("enriched input '" + input.dialogue_id +
                "' section lengths do not match its text");
  }
}

nlohmann::ordered_json EnrichedToJson(const EnrichedInput& input) {
  nlohmann::ordered_json j;
  j["dialogue_id"] = input.dialogue_id;
  j["k"] = input.k;
  j["section_lengths"] = {{"E", input.event_length},
                          {"F", input.summary_length},
                          {"lead", input.lead_length}};
  j["text"] = input.text;
  return j;
}

EnrichedInput EnrichedFromJson(const nlohmann::json& j) {
  EnrichedInput in;
  try {
    in.dialogue_id = j.at("dialogue_id").get<std::string>();
    in.k = j.at("k").get<std::size_t>();
    const auto& lengths = j.at("section_lengths");
    in.event_length = lengths.at("E").get<std::size_t>();
    in.summary_length = lengths.at("F").get<std::size_t>();
    in.lead_length = lengths.at("lead").get<std::size_t>();
    in.text = j.at("text").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed enriched record: ") + e.what());
  }
  ValidateEnriched(in);
  return in;
}

std::string_view SummarizerModeName(SummarizerMode mode) {
  switch (mode) {
    case SummarizerMode::kPassthrough:
      return "passthrough";
    case SummarizerMode::kLlm:
      return "llm";
    case SummarizerMode::kHttpModel:
      return "http-model";
  }
  return "passthrough";
}

SummarizerMode ParseSummarizerMode(std::string_view name) {
  if (name == "passthrough") return SummarizerMode::kPassthrough;
  if (name == "llm") return SummarizerMode::kLlm;
  if (name == "http-model") return SummarizerMode::kHttpModel;
  throw Error("unknown summarizer mode '" + std::string(name) + "'");
}

std::string PassthroughSummarizer::Summarize(const EnrichedInput& input) {
  return std::string(SectionOf(input, Section::kFirstStage));
}

LlmSummarizer::LlmSummarizer(std::shared_ptr<LlmBackend> llm,
                             PromptTemplate prompt,
                             std::shared_ptr<ResponseCache> cache,
                             CondenseOptions options)
    : llm_(std::move(llm)),
      prompt_(std::move(prompt)),
      cache_(std::move(cache)),
      options_(std::move(options)) {}

std::string LlmSummarizer::identity() const {
  return "llm:" + llm_->identity() + "#" + prompt_.version();
}

std::string LlmSummarizer::Summarize(const EnrichedInput& input) {
  return CondenseSplit(input.text, prompt_, *llm_, *cache_, options_,
                       "dialogue '" + input.dialogue_id + "' summary");
}

HttpModelSummarizer::HttpModelSummarizer(std::string url, RetryPolicy retry,
                                         Sleeper sleep)
    : url_(std::move(url)), retry_(retry), sleep_(std::move(sleep)) {
  ParseEndpoint(url_);
}

std::string HttpModelSummarizer::Summarize(const EnrichedInput& input) {
  const Endpoint endpoint = ParseEndpoint(url_);
  const nlohmann::json request = {{"input", input.text}};
  nlohmann::json reply = CallWithRetries(
      [&] { return PostJson(endpoint, request); }, retry_, sleep_);
  auto it = reply.find("summary");
  if (it == reply.end() || !it->is_string()) {
    throw Error("http-model reply has no string 'summary'");
  }
  return it->get<std::string>();
}

SummarizeResult SummarizeCorpus(const std::vector<EnrichedInput>& inputs,
                                SummarizerBackend& backend,
                                std::size_t parallelism) {
  std::vector<std::string> outputs(inputs.size());
  std::vector<std::string> errors(inputs.size());
  std::vector<char> ok(inputs.size(), 0);
  ParallelFor(inputs.size(), parallelism, [&](std::size_t i) {
    try {
      outputs[i] = backend.Summarize(inputs[i]);
      ok[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  SummarizeResult result;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (ok[i]) {
      result.summaries[inputs[i].dialogue_id] = std::move(outputs[i]);
    } else {
      result.failures[inputs[i].dialogue_id] = std::move(errors[i]);
    }
  }
  return result;
}

}  // namespace dialsum
