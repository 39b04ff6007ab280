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

#ifndef DIALSUM_CORPUS_H_
#define DIALSUM_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialsum/errors.h"
#include "json.hpp"

namespace dialsum {

class CorpusError : public Error {
 public:
  using Error::Error;
};

enum class Partition { kTrain, kValidation, kTest };

std::string_view PartitionName(Partition p);
// Throws CorpusError for anything other than train/validation/test.
Partition ParsePartition(std::string_view name);

struct Utterance {
  int index = 0;  // 1-based position within the dialogue
  std::optional<std::string> speaker;
  std::string text;

  bool operator==(const Utterance&) const = default;
};

struct Dialogue {
  std::string id;
  std::vector<Utterance> utterances;
  std::optional<std::string> gold_summary;
  Partition partition = Partition::kTrain;

  std::size_t size() const { return utterances.size(); }
  bool operator==(const Dialogue&) const = default;
};

// Checks the per-dialogue invariants: non-empty utterance list, indices 1..n,
// every text has a non-whitespace character.  Throws CorpusError.
void ValidateDialogue(const Dialogue& dialogue);

// Builds a validated dialogue from (speaker, text) pairs, assigning indices.
Dialogue MakeDialogue(std::string id,
                      std::vector<std::pair<std::optional<std::string>,
                                            std::string>> turns,
                      std::optional<std::string> gold_summary = std::nullopt,
                      Partition partition = Partition::kTrain);

class Corpus {
 public:
  Corpus() = default;
  // Throws CorpusError on duplicate ids or invalid dialogues.
  explicit Corpus(std::vector<Dialogue> dialogues);

  const std::vector<Dialogue>& dialogues() const { return dialogues_; }
  std::size_t size() const { return dialogues_.size(); }
  std::size_t count(Partition p) const;
  const Dialogue* find(std::string_view id) const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<Dialogue> dialogues_;
};

// Renders "speaker: text" when a speaker is present, else the bare text.
std::string RenderUtterance(const Utterance& u);
// Newline-joined rendering of a run of utterances.
std::string RenderUtterances(std::span<const Utterance> utterances);

// First min(k, n) utterances of the dialogue, in order.
std::span<const Utterance> Lead(std::size_t k, const Dialogue& dialogue);

nlohmann::ordered_json DialogueToJson(const Dialogue& dialogue);
// `where` prefixes error messages, e.g. "corpus.jsonl:12".
Dialogue DialogueFromJson(const nlohmann::json& record, std::string_view where);

// JSONL reader.  Blank lines are skipped; every other line must be one
// dialogue record.  Errors name the source, line number and dialogue id.
Corpus ParseCorpus(std::istream& in, std::string_view source_name);
Corpus LoadCorpus(const std::filesystem::path& path);

void WriteCorpus(const Corpus& corpus, std::ostream& out);

}  // namespace dialsum

#endif  // DIALSUM_CORPUS_H_
