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

#include "dialsum/condenser.h"

#include <cctype>
#include <sstream>

#include "dialsum/http_client.h"
#include "dialsum/parallel.h"

namespace dialsum {
namespace {

std::size_t CountOccurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

std::string StripTrailingSpace(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.pop_back();
  }
  return s;
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

std::string_view PromptKindName(PromptKind kind) {
  switch (kind) {
    case PromptKind::kFirstStageSummary:
      return "first_stage_summary";
    case PromptKind::kEventList:
      return "event_list";
    case PromptKind::kSecondStageSummary:
      return "second_stage_summary";
  }
  return "first_stage_summary";
}

PromptTemplate::PromptTemplate(PromptKind kind, std::string text,
                               std::string version)
    : kind_(kind), text_(std::move(text)), version_(std::move(version)) {
  const std::size_t n = CountOccurrences(text_, kInputPlaceholder);
  if (n != 1) {
    throw Error("prompt template '" + std::string(PromptKindName(kind_)) +
                "' must contain exactly one {input} placeholder, found " +
                std::to_string(n));
  }
}

PromptTemplate PromptTemplate::DefaultFirstStageSummary() {
  return PromptTemplate(
      PromptKind::kFirstStageSummary,
      "Summarize the following dialogue segment in 5 sentences or fewer:\n"
      "{input}",
      "first-stage-v1");
}

PromptTemplate PromptTemplate::DefaultEventList() {
  return PromptTemplate(
      PromptKind::kEventList,
      "List the events that occur in the following dialogue segment as short, "
      "objective, chronological bullet points:\n{input}",
      "event-list-v1");
}

PromptTemplate PromptTemplate::DefaultSecondStageSummary() {
  return PromptTemplate(PromptKind::kSecondStageSummary,
                        "Summarize the following text in one paragraph:\n"
                        "{input}",
                        "second-stage-v1");
}

std::string RenderPrompt(const PromptTemplate& prompt, std::string_view input) {
  const std::string& t = prompt.text();
  const std::size_t pos = t.find(kInputPlaceholder);
  std::string out;
  out.reserve(t.size() + input.size());
  out.append(t, 0, pos);
  out.append(input);
  out.append(t, pos + kInputPlaceholder.size());
  return out;
}

std::string MockLlmBackend::identity() const {
  return "mock-llm/lines=" + std::to_string(lines_);
}

std::string MockLlmBackend::Generate(const GenerationRequest& request) {
  ++calls_;
  std::string out;
  std::size_t taken = 0;
  std::size_t start = 0;
  const std::string& in = request.input;
  while (taken < lines_ && start <= in.size()) {
    std::size_t nl = in.find('\n', start);
    if (nl == std::string::npos) nl = in.size();
    if (taken > 0) out += '\n';
    out.append(in, start, nl - start);
    ++taken;
    start = nl + 1;
  }
  return out;
}

ChatCompletionBackend::ChatCompletionBackend(ChatCompletionConfig config)
    : config_(std::move(config)) {
  if (config_.model.empty()) throw Error("chat backend needs a model name");
  ParseEndpoint(config_.api_base);
}

std::string ChatCompletionBackend::identity() const {
  return "chat:" + config_.api_base + "#" + config_.model +
         "?temperature=" + FormatDouble(config_.temperature) +
         "&max_tokens=" + std::to_string(config_.max_tokens);
}

std::string ChatCompletionBackend::Generate(const GenerationRequest& request) {
  std::string base = config_.api_base;
  while (!base.empty() && base.back() == '/') base.pop_back();
  const Endpoint endpoint = ParseEndpoint(base + "/chat/completions");

  nlohmann::json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::json::array(
      {{{"role", "user"}, {"content", request.prompt}}});
  body["temperature"] = config_.temperature;
  body["max_tokens"] = config_.max_tokens;

  std::map<std::string, std::string> headers;
  if (!config_.api_key.empty()) {
    headers["Authorization"] = "Bearer " + config_.api_key;
  }
  nlohmann::json reply = PostJson(endpoint, body, headers,
                                  std::chrono::seconds(config_.timeout_seconds));
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw Error("chat completion reply has no choices[0].message.content");
  }
}

ConcurrencyLimitedBackend::ConcurrencyLimitedBackend(
    std::shared_ptr<LlmBackend> inner, std::ptrdiff_t max_in_flight)
    : inner_(std::move(inner)), slots_(max_in_flight < 1 ? 1 : max_in_flight) {}

std::string ConcurrencyLimitedBackend::Generate(const GenerationRequest& request) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return inner_->Generate(request);
}

std::string CondenseSplit(std::string_view split_text,
                          const PromptTemplate& prompt, LlmBackend& backend,
                          ResponseCache& cache, const CondenseOptions& options,
                          std::string_view label) {
  const std::string identity = backend.identity();
  const std::string key =
      CacheKey(identity, prompt.version(), prompt.text(), split_text);
  if (auto hit = cache.Get(key)) return *hit;

  GenerationRequest request{RenderPrompt(prompt, split_text),
                            std::string(split_text)};
  std::string generated;
  try {
    generated = CallWithRetries([&] { return backend.Generate(request); },
                                options.retry, options.sleep);
  } catch (const Error& e) {
    throw CondenseError(std::string(label) + " (" +
                        std::string(PromptKindName(prompt.kind())) +
                        "): " + e.what());
  }
  generated = StripTrailingSpace(std::move(generated));
  if (generated.empty()) {
    throw CondenseError(std::string(label) + " (" +
                        std::string(PromptKindName(prompt.kind())) +
                        "): backend returned an empty generation");
  }
  cache.Put(key, generated,
            {identity, std::string(PromptKindName(prompt.kind())),
             prompt.version()});
  return generated;
}

std::string JoinParts(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += '\n';
    out += parts[i];
  }
  return out;
}

void ValidateCondensed(const CondensedDoc& doc) {
  if (doc.summaries.size() != doc.events.size()) {
    throw Error("condensed doc '" + doc.dialogue_id + "' has " +
                std::to_string(doc.summaries.size()) + " summaries but " +
                std::to_string(doc.events.size()) + " event lists");
  }
  if (doc.first_stage != JoinParts(doc.summaries) ||
      doc.event_list != JoinParts(doc.events)) {
    throw Error("condensed doc '" + doc.dialogue_id +
                "' joins do not match their parts");
  }
}

CondensedDoc CondenseDocument(const Dialogue& dialogue, const SplitPlan& plan,
                              LlmBackend& backend,
                              const PromptTemplate& summary_prompt,
                              const PromptTemplate& event_prompt,
                              ResponseCache& cache,
                              const CondenseOptions& options) {
  const std::vector<std::string> texts = MaterializeSplits(dialogue, plan);
  const std::size_t m = texts.size();

  CondensedDoc doc;
  doc.dialogue_id = dialogue.id;
  doc.summaries.resize(m);
  doc.events.resize(m);
  // Tasks [0, m) are summaries, [m, 2m) event lists.
  ParallelFor(2 * m, options.parallelism, [&](std::size_t task) {
    const std::size_t i = task % m;
    const bool summary = task < m;
    const std::string label = "dialogue '" + dialogue.id + "' split " +
                              std::to_string(i + 1) + "/" + std::to_string(m);
    std::string out = CondenseSplit(texts[i], summary ? summary_prompt : event_prompt,
                                    backend, cache, options, label);
    (summary ? doc.summaries : doc.events)[i] = std::move(out);
  });
  doc.first_stage = JoinParts(doc.summaries);
  doc.event_list = JoinParts(doc.events);
  doc.provenance = {backend.identity(), summary_prompt.version(),
                    event_prompt.version(), SplitPlanHash(plan)};
  return doc;
}

nlohmann::ordered_json CondensedToJson(const CondensedDoc& doc) {
  nlohmann::ordered_json j;
  j["dialogue_id"] = doc.dialogue_id;
  j["summaries"] = doc.summaries;
  j["events"] = doc.events;
  j["F"] = doc.first_stage;
  j["E"] = doc.event_list;
  j["provenance"] = {{"backend", doc.provenance.backend},
                     {"summary_prompt_version", doc.provenance.summary_prompt_version},
                     {"event_prompt_version", doc.provenance.event_prompt_version},
                     {"split_plan_hash", doc.provenance.split_plan_hash}};
  return j;
}

CondensedDoc CondensedFromJson(const nlohmann::json& j) {
  CondensedDoc doc;
  try {
    doc.dialogue_id = j.at("dialogue_id").get<std::string>();
    doc.summaries = j.at("summaries").get<std::vector<std::string>>();
    doc.events = j.at("events").get<std::vector<std::string>>();
    doc.first_stage = j.at("F").get<std::string>();
    doc.event_list = j.at("E").get<std::string>();
    const auto& p = j.at("provenance");
    doc.provenance = {p.at("backend").get<std::string>(),
                      p.at("summary_prompt_version").get<std::string>(),
                      p.at("event_prompt_version").get<std::string>(),
                      p.at("split_plan_hash").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed condensed record: ") + e.what());
  }
  ValidateCondensed(doc);
  return doc;
}

}  // namespace dialsum
