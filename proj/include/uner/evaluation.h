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

#ifndef UNER_EVALUATION_H_
#define UNER_EVALUATION_H_

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uner/annotator.h"
#include "uner/conll.h"
#include "uner/stats.h"

namespace uner {

// Gold and system files disagree. Line numbers are 1-based, 0 when the
// divergence is an end of file.
class AlignmentError : public DataError {
 public:
  AlignmentError(const std::string& what, std::size_t gold_line,
                 std::size_t system_line)
      : DataError(what), gold_line_(gold_line), system_line_(system_line) {}
  std::size_t gold_line() const { return gold_line_; }
  std::size_t system_line() const { return system_line_; }

 private:
  std::size_t gold_line_;
  std::size_t system_line_;
};

struct TagPair {
  std::string token_text;
  IobTag gold;
  IobTag system;
};

// Pairs tokens position by position. When the gold file carries doc_id
// headers, each gold document is matched to the system document with the
// same id; otherwise documents are paired in order.
std::vector<TagPair> Align(const AnnotatedCorpus& gold,
                           const ConllLines& gold_lines,
                           const AnnotatedCorpus& system,
                           const ConllLines& system_lines);

std::vector<TagPair> AlignStreams(std::istream& gold,
                                  std::string_view gold_source,
                                  std::istream& system,
                                  std::string_view system_source);

// Tag string after keeping the first `depth` label segments.
std::string CollapseTag(const IobTag& tag, std::optional<std::size_t> depth);

struct TagMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  // Percentages in full precision; 0/0 is 0.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Gold occurrences (tp + fn).
  std::size_t support = 0;
};

struct MacroMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  // Every tag of gold or system, "O" included.
  std::map<std::string, TagMetrics> per_tag;
  // Mean over counted_tags.
  MacroMetrics macro;
  // Non-O tags whose P, R and F1 are not all zero.
  std::vector<std::string> counted_tags;
  std::optional<std::size_t> collapse_depth;
  std::size_t tokens = 0;
};

// Token-level scores with B-X and I-X as separate tags. Throws DataError on
// an empty pair list and ConfigError on a collapse depth outside 1..4.
EvalReport PerTagMetrics(std::span<const TagPair> pairs,
                         std::optional<std::size_t> collapse_depth = {});

// Half-up rounding to one decimal, for emission only.
double RoundOneDecimal(double value);

std::string FormatReportText(const EvalReport& report, bool include_outside);
std::string ReportToJson(const EvalReport& report, bool include_outside);

// Person / Location / Organization entity counts of a corpus.
std::map<std::string, CoarseCount> CoarseReport(const AnnotatedCorpus& corpus);

}  // namespace uner

#endif  // UNER_EVALUATION_H_
