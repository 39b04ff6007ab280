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

#include "dialsum/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace dialsum {
namespace {

bool HasNonSpace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return !std::isspace(c);
  });
}

std::string Describe(const Dialogue& d) { return "dialogue '" + d.id + "'"; }

}  // namespace

std::string_view PartitionName(Partition p) {
  switch (p) {
    case Partition::kTrain:
      return "train";
    case Partition::kValidation:
      return "validation";
    case Partition::kTest:
      return "test";
  }
  return "train";
}

Partition ParsePartition(std::string_view name) {
  if (name == "train") return Partition::kTrain;
  if (name == "validation") return Partition::kValidation;
  if (name == "test") return Partition::kTest;
  throw CorpusError("unknown partition '" + std::string(name) + "'");
}

void ValidateDialogue(const Dialogue& dialogue) {
  if (dialogue.id.empty()) throw CorpusError("dialogue with empty id");
  if (dialogue.utterances.empty()) {
    throw CorpusError(Describe(dialogue) + " has no utterances");
  }
  for (std::size_t i = 0; i < dialogue.utterances.size(); ++i) {
    const Utterance& u = dialogue.utterances[i];
    if (u.index != static_cast<int>(i) + 1) {
      throw CorpusError(Describe(dialogue) + ": utterance at position " +
                        std::to_string(i + 1) + " has index " +
                        std::to_string(u.index));
    }
    if (!HasNonSpace(u.text)) {
      throw CorpusError(Describe(dialogue) + ": utterance " +
                        std::to_string(i + 1) + " has empty text");
    }
  }
}

Dialogue MakeDialogue(
    std::string id,
    std::vector<std::pair<std::optional<std::string>, std::string>> turns,
    std::optional<std::string> gold_summary, Partition partition) {
  Dialogue d;
  d.id = std::move(id);
  d.gold_summary = std::move(gold_summary);
  d.partition = partition;
  d.utterances.reserve(turns.size());
  int index = 1;
  for (auto& [speaker, text] : turns) {
    d.utterances.push_back({index++, std::move(speaker), std::move(text)});
  }
  ValidateDialogue(d);
  return d;
}

Corpus::Corpus(std::vector<Dialogue> dialogues)
    : dialogues_(std::move(dialogues)) {
  std::unordered_set<std::string> seen;
  for (const Dialogue& d : dialogues_) {
    ValidateDialogue(d);
    if (!seen.insert(d.id).second) {
      throw CorpusError("duplicate dialogue id '" + d.id + "'");
    }
  }
}

std::size_t Corpus::count(Partition p) const {
  return static_cast<std::size_t>(
      std::count_if(dialogues_.begin(), dialogues_.end(),
                    [p](const Dialogue& d) { return d.partition == p; }));
}

const Dialogue* Corpus::find(std::string_view id) const {
  auto it = std::find_if(dialogues_.begin(), dialogues_.end(),
                         [id](const Dialogue& d) { return d.id == id; });
  return it == dialogues_.end() ? nullptr : &*it;
}

std::string RenderUtterance(const Utterance& u) {
  if (u.speaker) return *u.speaker + ": " + u.text;
  return u.text;
}

std::string RenderUtterances(std::span<const Utterance> utterances) {
  std::string out;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    if (i > 0) out += '\n';
    out += RenderUtterance(utterances[i]);
  }
  return out;
}

std::span<const Utterance> Lead(std::size_t k, const Dialogue& dialogue) {
  std::span<const Utterance> all(dialogue.utterances);
  return all.first(std::min(k, all.size()));
}

nlohmann::ordered_json DialogueToJson(const Dialogue& dialogue) {
  nlohmann::ordered_json out;
  out["id"] = dialogue.id;
  out["partition"] = std::string(PartitionName(dialogue.partition));
  auto& utterances = out["utterances"] = nlohmann::ordered_json::array();
  for (const Utterance& u : dialogue.utterances) {
    nlohmann::ordered_json item;
    item["speaker"] = u.speaker ? nlohmann::ordered_json(*u.speaker) : nullptr;
    item["text"] = u.text;
    utterances.push_back(std::move(item));
  }
  out["summary"] = dialogue.gold_summary
                       ? nlohmann::ordered_json(*dialogue.gold_summary)
                       : nullptr;
  return out;
}

Dialogue DialogueFromJson(const nlohmann::json& record,
                          std::string_view where) {
  const std::string prefix = std::string(where) + ": ";
  if (!record.is_object()) throw CorpusError(prefix + "record is not an object");
  auto id_it = record.find("id");
  if (id_it == record.end() || !id_it->is_string()) {
    throw CorpusError(prefix + "missing string field 'id'");
  }
  Dialogue d;
  d.id = id_it->get<std::string>();
  const std::string named = prefix + "dialogue '" + d.id + "': ";

  auto part_it = record.find("partition");
  if (part_it == record.end() || !part_it->is_string()) {
    throw CorpusError(named + "missing string field 'partition'");
  }
  try {
    d.partition = ParsePartition(part_it->get<std::string>());
  } catch (const CorpusError& e) {
    throw CorpusError(named + e.what());
  }

  auto utt_it = record.find("utterances");
  if (utt_it == record.end() || !utt_it->is_array()) {
    throw CorpusError(named + "missing array field 'utterances'");
  }
  int index = 1;
  for (const auto& item : *utt_it) {
    if (!item.is_object()) {
      throw CorpusError(named + "utterance " + std::to_string(index) +
                        " is not an object");
    }
    Utterance u;
    u.index = index;
    if (auto s = item.find("speaker"); s != item.end() && !s->is_null()) {
      if (!s->is_string()) {
        throw CorpusError(named + "utterance " + std::to_string(index) +
                          " has a non-string speaker");
      }
      u.speaker = s->get<std::string>();
    }
    auto t = item.find("text");
    if (t == item.end() || !t->is_string()) {
      throw CorpusError(named + "utterance " + std::to_string(index) +
                        " has no text");
    }
    u.text = t->get<std::string>();
    d.utterances.push_back(std::move(u));
    ++index;
  }
  if (auto s = record.find("summary"); s != record.end() && !s->is_null()) {
    if (!s->is_string()) throw CorpusError(named + "summary is not a string");
    d.gold_summary = s->get<std::string>();
  }
  try {
    ValidateDialogue(d);
  } catch (const CorpusError& e) {
    throw CorpusError(prefix + e.what());
  }
  return d;
}

Corpus ParseCorpus(std::istream& in, std::string_view source_name) {
  std::vector<Dialogue> dialogues;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!HasNonSpace(line)) continue;
    const std::string where =
        std::string(source_name) + ":" + std::to_string(line_no);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw CorpusError(where + ": malformed JSON: " + e.what());
    }
    Dialogue d = DialogueFromJson(record, where);
    if (!seen.insert(d.id).second) {
      throw CorpusError(where + ": duplicate dialogue id '" + d.id + "'");
    }
    dialogues.push_back(std::move(d));
  }
  if (dialogues.empty()) {
    throw CorpusError(std::string(source_name) + ": empty corpus");
  }
  return Corpus(std::move(dialogues));
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read corpus file " + path.string());
  return ParseCorpus(in, path.string());
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  for (const Dialogue& d : corpus.dialogues()) {
    out << DialogueToJson(d).dump() << '\n';
  }
}

}  // namespace dialsum
