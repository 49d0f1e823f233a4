// Copyright 2026 The UNER Corpus Authors.
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

#include "uner/evaluation.h"

#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "json.hpp"

namespace uner {
namespace {

using Lines = std::vector<std::vector<std::size_t>>;

// Line of token `t` in a sentence, or the line just after its last token.
std::size_t LineAt(const std::vector<std::size_t>& lines, std::size_t t) {
  if (t < lines.size()) return lines[t];
  return lines.empty() ? 0 : lines.back() + 1;
}

std::size_t FirstLine(const Lines& doc) {
  return doc.empty() || doc.front().empty() ? 0 : doc.front().front();
}

void AlignDocument(const AnnotatedDocument& gold, const Lines& gold_lines,
                   const AnnotatedDocument& system, const Lines& system_lines,
                   std::vector<TagPair>& out) {
  const std::size_t n = std::min(gold.sentences.size(), system.sentences.size());
  for (std::size_t s = 0; s < n; ++s) {
    const auto& g = gold.sentences[s].tokens;
    const auto& y = system.sentences[s].tokens;
    const std::size_t m = std::min(g.size(), y.size());
    for (std::size_t t = 0; t < m; ++t) {
      if (g[t].text != y[t].text) {
        throw AlignmentError("token mismatch: gold '" + g[t].text +
                                 "' vs system '" + y[t].text + "'",
                             gold_lines[s][t], system_lines[s][t]);
      }
      out.push_back(TagPair{g[t].text, g[t].tag, y[t].tag});
    }
    if (g.size() != y.size()) {
      throw AlignmentError("sentence length mismatch in document '" +
                               gold.doc_id + "'",
                           LineAt(gold_lines[s], m), LineAt(system_lines[s], m));
    }
  }
  if (gold.sentences.size() != system.sentences.size()) {
    const std::size_t gl = n < gold_lines.size() ? LineAt(gold_lines[n], 0) : 0;
    const std::size_t sl =
        n < system_lines.size() ? LineAt(system_lines[n], 0) : 0;
    throw AlignmentError("sentence count mismatch in document '" +
                             gold.doc_id + "'",
                         gl, sl);
  }
}

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) /
                              static_cast<double>(den);
}

}  // namespace

std::vector<TagPair> Align(const AnnotatedCorpus& gold,
                           const ConllLines& gold_lines,
                           const AnnotatedCorpus& system,
                           const ConllLines& system_lines) {
  std::vector<TagPair> pairs;
  if (gold_lines.has_doc_ids && system_lines.has_doc_ids) {
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t d = 0; d < system.documents.size(); ++d) {
      by_id.emplace(system.documents[d].doc_id, d);
    }
    for (std::size_t d = 0; d < gold.documents.size(); ++d) {
      auto it = by_id.find(gold.documents[d].doc_id);
      if (it == by_id.end()) {
        throw AlignmentError("document '" + gold.documents[d].doc_id +
                                 "' missing from system output",
                             FirstLine(gold_lines.tokens[d]), 0);
      }
      AlignDocument(gold.documents[d], gold_lines.tokens[d],
                    system.documents[it->second],
                    system_lines.tokens[it->second], pairs);
    }
    return pairs;
  }
  const std::size_t n =
      std::min(gold.documents.size(), system.documents.size());
  for (std::size_t d = 0; d < n; ++d) {
    AlignDocument(gold.documents[d], gold_lines.tokens[d], system.documents[d],
                  system_lines.tokens[d], pairs);
  }
  if (gold.documents.size() != system.documents.size()) {
    throw AlignmentError(
        "document count mismatch",
        n < gold.documents.size() ? FirstLine(gold_lines.tokens[n]) : 0,
        n < system.documents.size() ? FirstLine(system_lines.tokens[n]) : 0);
  }
  return pairs;
}

std::vector<TagPair> AlignStreams(std::istream& gold,
                                  std::string_view gold_source,
                                  std::istream& system,
                                  std::string_view system_source) {
  ConllLines gold_lines;
  ConllLines system_lines;
  const AnnotatedCorpus g = ParseConll(gold, gold_source, &gold_lines);
  const AnnotatedCorpus s = ParseConll(system, system_source, &system_lines);
  return Align(g, gold_lines, s, system_lines);
}

std::string CollapseTag(const IobTag& tag, std::optional<std::size_t> depth) {
  if (!depth || tag.is_outside()) return tag.ToString();
  const UnerLabel label = tag.label()->Truncate(*depth);
  return (tag.is_begin() ? "B-" : "I-") + label.str();
}

EvalReport PerTagMetrics(std::span<const TagPair> pairs,
                         std::optional<std::size_t> collapse_depth) {
  if (pairs.empty()) throw DataError("nothing to score: no aligned tokens");
  if (collapse_depth &&
      (*collapse_depth < 1 || *collapse_depth > UnerLabel::kMaxDepth)) {
    throw ConfigError("collapse depth must be between 1 and 4");
  }
  EvalReport report;
  report.collapse_depth = collapse_depth;
  report.tokens = pairs.size();
  for (const TagPair& pair : pairs) {
    const std::string gold = CollapseTag(pair.gold, collapse_depth);
    const std::string system = CollapseTag(pair.system, collapse_depth);
    if (gold == system) {
      ++report.per_tag[gold].tp;
    } else {
      ++report.per_tag[gold].fn;
      ++report.per_tag[system].fp;
    }
  }
  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  for (auto& [tag, m] : report.per_tag) {
    m.support = m.tp + m.fn;
    m.precision = Ratio(m.tp, m.tp + m.fp);
    m.recall = Ratio(m.tp, m.tp + m.fn);
    m.f1 = m.precision + m.recall == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    if (tag == "O") continue;
    if (m.precision == 0.0 && m.recall == 0.0 && m.f1 == 0.0) continue;
    report.counted_tags.push_back(tag);
    sum_p += m.precision;
    sum_r += m.recall;
    sum_f += m.f1;
  }
  if (!report.counted_tags.empty()) {
    const double n = static_cast<double>(report.counted_tags.size());
    report.macro = {sum_p / n, sum_r / n, sum_f / n};
  }
  return report;
}

double RoundOneDecimal(double value) {
  // The nudge keeps decimal halves such as 1.45 (stored just below) rounding up.
  return std::floor(value * 10.0 + 0.5 + 1e-9) / 10.0;
}

std::string FormatReportText(const EvalReport& report, bool include_outside) {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-60s %7s %7s %7s %8s\n", "tag", "P", "R",
                "F1", "support");
  out += buf;
  for (const auto& [tag, m] : report.per_tag) {
    if (tag == "O" && !include_outside) continue;
    std::snprintf(buf, sizeof buf, "%-60s %7.1f %7.1f %7.1f %8zu\n",
                  tag.c_str(), RoundOneDecimal(m.precision),
                  RoundOneDecimal(m.recall), RoundOneDecimal(m.f1), m.support);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-60s %7.1f %7.1f %7.1f %8zu\n",
                "macro (nonzero tags)", RoundOneDecimal(report.macro.precision),
                RoundOneDecimal(report.macro.recall),
                RoundOneDecimal(report.macro.f1), report.counted_tags.size());
  out += buf;
  if (report.collapse_depth) {
    out += "collapse depth: " + std::to_string(*report.collapse_depth) + "\n";
  }
  return out;
}

std::string ReportToJson(const EvalReport& report, bool include_outside) {
  nlohmann::ordered_json j;
  j["tokens"] = report.tokens;
  j["collapse_depth"] = report.collapse_depth
                            ? nlohmann::ordered_json(*report.collapse_depth)
                            : nlohmann::ordered_json(nullptr);
  j["macro"] = {{"precision", RoundOneDecimal(report.macro.precision)},
                {"recall", RoundOneDecimal(report.macro.recall)},
                {"f1", RoundOneDecimal(report.macro.f1)}};
  j["counted_tags"] = report.counted_tags;
  nlohmann::ordered_json tags = nlohmann::ordered_json::object();
  for (const auto& [tag, m] : report.per_tag) {
    if (tag == "O" && !include_outside) continue;
    tags[tag] = {{"precision", RoundOneDecimal(m.precision)},
                 {"recall", RoundOneDecimal(m.recall)},
                 {"f1", RoundOneDecimal(m.f1)},
                 {"support", m.support},
                 {"tp", m.tp},
                 {"fp", m.fp},
                 {"fn", m.fn}};
  }
  j["per_tag"] = std::move(tags);
  return j.dump(2) + "\n";
}

std::map<std::string, CoarseCount> CoarseReport(const AnnotatedCorpus& corpus) {
  return ComputeStats(corpus).coarse_counts;
}

}  // namespace uner
