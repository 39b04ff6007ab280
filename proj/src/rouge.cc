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

#include "dialsum/rouge.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <unordered_map>

#include "dialsum/porter_stemmer.h"

namespace dialsum {
namespace {

std::unordered_map<std::string, std::size_t> NGramCounts(
    const std::vector<std::string>& tokens, std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (std::size_t j = 1; j < n; ++j) {
      gram += '\x1f';
      gram += tokens[i + j];
    }
    ++counts[gram];
  }
  return counts;
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

nlohmann::ordered_json ScoreJson(const RougeScore& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

nlohmann::ordered_json TripleJson(const RougeTriple& t) {
  nlohmann::ordered_json j;
  for (std::size_t m = 0; m < 3; ++m) {
    j[std::string(RougeMetricName(static_cast<RougeMetric>(m)))] = ScoreJson(t[m]);
  }
  return j;
}

}  // namespace

std::string_view RougeMetricName(RougeMetric m) {
  switch (m) {
    case RougeMetric::kRouge1:
      return "rouge1";
    case RougeMetric::kRouge2:
      return "rouge2";
    case RougeMetric::kRougeL:
      return "rougeL";
  }
  return "rouge1";
}

RougeScore MakeScore(double precision, double recall) {
  const double sum = precision + recall;
  return {precision, recall, sum > 0 ? 2 * precision * recall / sum : 0.0};
}

std::vector<std::string> TokenizeForRouge(std::string_view text, bool stemming) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    tokens.push_back(stemming ? PorterStem(current) : current);
    current.clear();
  };
  for (unsigned char c : text) {
    if (c < 0x80 && std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

RougeScore RougeN(const std::vector<std::string>& candidate,
                  const std::vector<std::string>& reference, std::size_t n) {
  if (n == 0) throw Error("ROUGE-N needs n >= 1");
  const auto cand = NGramCounts(candidate, n);
  const auto ref = NGramCounts(reference, n);
  if (cand.empty() || ref.empty()) return {};
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) {
      overlap += std::min(count, it->second);
    }
  }
  const double cand_total = static_cast<double>(candidate.size() - n + 1);
  const double ref_total = static_cast<double>(reference.size() - n + 1);
  return MakeScore(overlap / std::max(1.0, cand_total),
                   overlap / std::max(1.0, ref_total));
}

std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      row[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], row[j - 1]);
    }
    std::swap(prev, row);
  }
  return prev[b.size()];
}

RougeScore RougeL(const std::vector<std::string>& candidate,
                  const std::vector<std::string>& reference) {
  if (candidate.empty() || reference.empty()) return {};
  const double lcs = static_cast<double>(LcsLength(candidate, reference));
  return MakeScore(lcs / candidate.size(), lcs / reference.size());
}

RougeTriple ScorePair(std::string_view candidate, std::string_view reference,
                      const RougeConfig& config) {
  const auto cand = TokenizeForRouge(candidate, config.stemming);
  const auto ref = TokenizeForRouge(reference, config.stemming);
  return {RougeN(cand, ref, 1), RougeN(cand, ref, 2), RougeL(cand, ref)};
}

RougeReport EvaluateCorpus(const std::map<std::string, std::string>& predictions,
                           const std::map<std::string, std::string>& references,
                           const RougeConfig& config) {
  std::vector<std::string> missing_ref, missing_pred;
  for (const auto& [id, _] : predictions) {
    if (!references.count(id)) missing_ref.push_back(id);
  }
  for (const auto& [id, _] : references) {
    if (!predictions.count(id)) missing_pred.push_back(id);
  }
  if (!missing_ref.empty() || !missing_pred.empty()) {
    std::string msg = "prediction/reference id sets differ;";
    if (!missing_pred.empty()) {
      msg += " missing predictions:";
      for (const auto& id : missing_pred) msg += " " + id;
      msg += ";";
    }
    if (!missing_ref.empty()) {
      msg += " missing references:";
      for (const auto& id : missing_ref) msg += " " + id;
      msg += ";";
    }
    msg.pop_back();
    throw RougeKeyMismatch(msg);
  }

  RougeReport report;
  report.config = config;
  for (const auto& [id, prediction] : predictions) {
    report.per_document[id] = ScorePair(prediction, references.at(id), config);
  }
  if (report.per_document.empty()) return report;
  const double count = static_cast<double>(report.per_document.size());
  for (std::size_t m = 0; m < 3; ++m) {
    double p = 0, r = 0, f = 0;
    for (const auto& [_, triple] : report.per_document) {
      p += triple[m].precision;
      r += triple[m].recall;
      f += triple[m].f1;
    }
    report.aggregate[m] = {p / count, r / count, f / count};
  }
  return report;
}

nlohmann::ordered_json RougeReportToJson(const RougeReport& report) {
  nlohmann::ordered_json j;
  j["config"] = {{"stemming", report.config.stemming},
                 {"tokenizer", std::string(kRougeTokenizerId)},
                 {"rougeL", "whole-sequence-lcs"},
                 {"aggregation", "mean-over-documents"}};
  j["documents"] = report.per_document.size();
  j["aggregate"] = TripleJson(report.aggregate);
  auto& docs = j["per_document"] = nlohmann::ordered_json::object();
  for (const auto& [id, triple] : report.per_document) docs[id] = TripleJson(triple);
  return j;
}

std::string FormatRougeTable(
    const std::vector<std::pair<std::string, RougeReport>>& rows,
    std::string_view first_column) {
  std::size_t width = first_column.size();
  for (const auto& [name, _] : rows) width = std::max(width, name.size());
  constexpr std::size_t kCol = 9;
  auto pad_right = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  auto pad_left = [](const std::string& s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  std::string out = pad_right(std::string(first_column), width);
  for (const char* h : {"ROUGE-1", "ROUGE-2", "ROUGE-L"}) out += "  " + pad_left(h, kCol);
  out += '\n';
  out += std::string(width + 3 * (kCol + 2), '-');
  out += '\n';
  for (const auto& [name, report] : rows) {
    out += pad_right(name, width);
    for (const RougeScore& s : report.aggregate) out += "  " + pad_left(Percent(s.f1), kCol);
    out += '\n';
  }
  return out;
}

}  // namespace dialsum
