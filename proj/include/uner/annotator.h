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

#ifndef UNER_ANNOTATOR_H_
#define UNER_ANNOTATOR_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uner/ingest.h"
#include "uner/mapping.h"

namespace uner {

// A token of document text; offsets are code points, [start, end).
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

enum class IobPrefix { kB, kI, kO };

class IobTag {
 public:
  static IobTag Outside() { return IobTag(IobPrefix::kO, std::nullopt); }
  static IobTag Begin(UnerLabel label) {
    return IobTag(IobPrefix::kB, std::move(label));
  }
  static IobTag Inside(UnerLabel label) {
    return IobTag(IobPrefix::kI, std::move(label));
  }

  // "O", "B-<label>" or "I-<label>". Throws DataError otherwise.
  static IobTag Parse(std::string_view text);

  IobPrefix prefix() const { return prefix_; }
  bool is_outside() const { return prefix_ == IobPrefix::kO; }
  bool is_begin() const { return prefix_ == IobPrefix::kB; }
  bool is_inside() const { return prefix_ == IobPrefix::kI; }
  // Present iff the prefix is not O.
  const std::optional<UnerLabel>& label() const { return label_; }

  std::string ToString() const;

  bool operator==(const IobTag&) const = default;

 private:
  IobTag(IobPrefix prefix, std::optional<UnerLabel> label)
      : prefix_(prefix), label_(std::move(label)) {}

  IobPrefix prefix_;
  std::optional<UnerLabel> label_;
};

struct AnnotatedToken {
  std::string text;
  IobTag tag = IobTag::Outside();

  bool operator==(const AnnotatedToken&) const = default;
};

struct AnnotatedSentence {
  std::vector<AnnotatedToken> tokens;

  bool operator==(const AnnotatedSentence&) const = default;
};

struct AnnotatedDocument {
  std::string doc_id;
  std::vector<AnnotatedSentence> sentences;

  bool operator==(const AnnotatedDocument&) const = default;
};

struct AnnotatedCorpus {
  std::vector<AnnotatedDocument> documents;

  bool operator==(const AnnotatedCorpus&) const = default;
};

// Splits on whitespace, then isolates every punctuation or symbol character
// (general categories P and S) as a token of its own.
std::vector<Token> Tokenize(std::string_view text);

struct SentenceRange {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const SentenceRange&) const = default;
};

// Rule-based splitter: a boundary follows '.', '!' or '?' when whitespace and
// then an uppercase letter come next, and every blank line is a boundary.
// Ranges are trimmed and never empty.
std::vector<SentenceRange> SplitSentences(std::string_view text);

// Link target -> label, for targets whose selected class maps to a label.
using LabelIndex = std::map<std::string, UnerLabel, std::less<>>;

struct ProjectionCounters {
  std::size_t spans_labeled = 0;
  std::size_t spans_unlabeled = 0;
  // Spans cut at a sentence boundary or at an already tagged token.
  std::size_t spans_truncated = 0;
  // Labeled spans left without any token.
  std::size_t spans_dropped = 0;
  std::size_t sentences_kept = 0;
  std::size_t sentences_dropped = 0;

  ProjectionCounters& operator+=(const ProjectionCounters& other);
};

// A projected entity together with the link target it came from.
struct Mention {
  std::string surface;
  std::string target;
};

// Tags the tokens covered by each labeled span (B on the first, I on the
// rest) and keeps only sentences with at least one B tag.
AnnotatedDocument ProjectAnnotations(const Document& doc,
                                     const LabelIndex& labels,
                                     const std::vector<Token>& tokens,
                                     const std::vector<SentenceRange>& sentences,
                                     ProjectionCounters* counters = nullptr,
                                     std::vector<Mention>* mentions = nullptr);

// Tokenize + SplitSentences + ProjectAnnotations.
AnnotatedDocument AnnotateDocument(const Document& doc,
                                   const LabelIndex& labels,
                                   ProjectionCounters* counters = nullptr,
                                   std::vector<Mention>* mentions = nullptr);

// Index of the first I-X whose predecessor is neither B-X nor I-X.
std::optional<std::size_t> FindIobViolation(const AnnotatedSentence& sentence);

bool HasBeginTag(const AnnotatedSentence& sentence);

// One B..I run inside a sentence.
struct EntityRun {
  std::size_t begin = 0;
  std::size_t end = 0;
  // Token texts joined by single spaces.
  std::string surface;
  UnerLabel label;
};

// Entities of a well-formed sentence, left to right.
std::vector<EntityRun> ExtractEntities(const AnnotatedSentence& sentence);

}  // namespace uner

#endif  // UNER_ANNOTATOR_H_
