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

#include "uner/annotator.h"

#include <algorithm>

#include "uner/unicode.h"

namespace uner {
namespace {

bool IsTerminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

}  // namespace

IobTag IobTag::Parse(std::string_view text) {
  if (text == "O") return Outside();
  if (text.size() > 2 && text[1] == '-' && (text[0] == 'B' || text[0] == 'I')) {
    UnerLabel label = UnerLabel::Parse(text.substr(2));
    return text[0] == 'B' ? Begin(std::move(label)) : Inside(std::move(label));
  }
  throw DataError("malformed IOB tag '" + std::string(text) + "'");
}

std::string IobTag::ToString() const {
  switch (prefix_) {
    case IobPrefix::kB:
      return "B-" + label_->str();
    case IobPrefix::kI:
      return "I-" + label_->str();
    case IobPrefix::kO:
      break;
  }
  return "O";
}

ProjectionCounters& ProjectionCounters::operator+=(
    const ProjectionCounters& other) {
  spans_labeled += other.spans_labeled;
  spans_unlabeled += other.spans_unlabeled;
  spans_truncated += other.spans_truncated;
  spans_dropped += other.spans_dropped;
  sentences_kept += other.sentences_kept;
  sentences_dropped += other.sentences_dropped;
  return *this;
}

std::vector<Token> Tokenize(std::string_view text) {
  const std::u32string chars = DecodeUtf8Lossy(text);
  std::vector<Token> tokens;
  auto emit = [&](std::size_t start, std::size_t end) {
    tokens.push_back(Token{
        EncodeUtf8(std::u32string_view(chars).substr(start, end - start)),
        start, end});
  };
  std::size_t i = 0;
  while (i < chars.size()) {
    if (IsWhitespace(chars[i])) {
      ++i;
    } else if (IsPunctuationOrSymbol(chars[i])) {
      emit(i, i + 1);
      ++i;
    } else {
      std::size_t j = i;
      while (j < chars.size() && !IsWhitespace(chars[j]) &&
             !IsPunctuationOrSymbol(chars[j])) {
        ++j;
      }
      emit(i, j);
      i = j;
    }
  }
  return tokens;
}

std::vector<SentenceRange> SplitSentences(std::string_view text) {
  const std::u32string chars = DecodeUtf8Lossy(text);
  const std::size_t n = chars.size();
  std::vector<std::size_t> bounds = {0};
  for (std::size_t i = 0; i < n; ++i) {
    if (IsTerminal(chars[i]) && i + 1 < n && IsWhitespace(chars[i + 1])) {
      std::size_t j = i + 1;
      while (j < n && IsWhitespace(chars[j])) ++j;
      if (j < n && IsUppercase(chars[j])) bounds.push_back(i + 1);
    }
    if (chars[i] == U'\n') {
      std::size_t j = i + 1;
      while (j < n && chars[j] != U'\n' && IsWhitespace(chars[j])) ++j;
      if (j < n && chars[j] == U'\n') bounds.push_back(i);
    }
  }
  bounds.push_back(n);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  std::vector<SentenceRange> ranges;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    std::size_t a = bounds[k];
    std::size_t b = bounds[k + 1];
    while (a < b && IsWhitespace(chars[a])) ++a;
    while (b > a && IsWhitespace(chars[b - 1])) --b;
    if (a < b) ranges.push_back({a, b});
  }
  return ranges;
}

AnnotatedDocument ProjectAnnotations(const Document& doc,
                                     const LabelIndex& labels,
                                     const std::vector<Token>& tokens,
                                     const std::vector<SentenceRange>& sentences,
                                     ProjectionCounters* counters,
                                     std::vector<Mention>* mentions) {
  ProjectionCounters local;
  // Sentence index of every token; ranges cover all non-whitespace text.
  std::vector<std::size_t> sentence_of(tokens.size(), sentences.size());
  {
    std::size_t s = 0;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      while (s < sentences.size() && sentences[s].end <= tokens[t].start) ++s;
      if (s < sentences.size() && sentences[s].start <= tokens[t].start) {
        sentence_of[t] = s;
      }
    }
  }

  std::vector<IobTag> tags(tokens.size(), IobTag::Outside());
  for (const LinkSpan& span : doc.links) {
    auto found = labels.find(span.target);
    if (found == labels.end()) {
      ++local.spans_unlabeled;
      continue;
    }
    ++local.spans_labeled;
    auto first = std::partition_point(
        tokens.begin(), tokens.end(),
        [&](const Token& t) { return t.end <= span.start; });
    const auto first_index = static_cast<std::size_t>(first - tokens.begin());
    std::size_t t = first_index;
    std::size_t overlapping_end = t;
    while (overlapping_end < tokens.size() &&
           tokens[overlapping_end].start < span.end) {
      ++overlapping_end;
    }
    while (t < overlapping_end && !tags[t].is_outside()) ++t;
    if (t == overlapping_end) {
      ++local.spans_dropped;
      continue;
    }
    const std::size_t sentence = sentence_of[t];
    const std::size_t begin = t;
    for (; t < overlapping_end; ++t) {
      if (sentence_of[t] != sentence || !tags[t].is_outside()) break;
      tags[t] = t == begin ? IobTag::Begin(found->second)
                           : IobTag::Inside(found->second);
    }
    if (begin != first_index || t != overlapping_end) {
      ++local.spans_truncated;
    }
    if (mentions != nullptr) {
      std::string surface;
      for (std::size_t k = begin; k < t; ++k) {
        if (k > begin) surface.push_back(' ');
        surface += tokens[k].text;
      }
      mentions->push_back(Mention{std::move(surface), span.target});
    }
  }

  AnnotatedDocument out;
  out.doc_id = doc.doc_id;
  std::size_t t = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    AnnotatedSentence sentence;
    bool has_begin = false;
    for (; t < tokens.size() && sentence_of[t] <= s; ++t) {
      if (sentence_of[t] != s) continue;
      has_begin = has_begin || tags[t].is_begin();
      sentence.tokens.push_back(AnnotatedToken{tokens[t].text, tags[t]});
    }
    if (has_begin) {
      out.sentences.push_back(std::move(sentence));
      ++local.sentences_kept;
    } else {
      ++local.sentences_dropped;
    }
  }
  if (counters != nullptr) *counters += local;
  return out;
}

AnnotatedDocument AnnotateDocument(const Document& doc,
                                   const LabelIndex& labels,
                                   ProjectionCounters* counters,
                                   std::vector<Mention>* mentions) {
  return ProjectAnnotations(doc, labels, Tokenize(doc.text),
                            SplitSentences(doc.text), counters, mentions);
}

std::optional<std::size_t> FindIobViolation(const AnnotatedSentence& sentence) {
  const auto& tokens = sentence.tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].tag.is_inside()) continue;
    if (i == 0 || tokens[i - 1].tag.is_outside() ||
        tokens[i - 1].tag.label() != tokens[i].tag.label()) {
      return i;
    }
  }
  return std::nullopt;
}

bool HasBeginTag(const AnnotatedSentence& sentence) {
  return std::any_of(sentence.tokens.begin(), sentence.tokens.end(),
                     [](const AnnotatedToken& t) { return t.tag.is_begin(); });
}

std::vector<EntityRun> ExtractEntities(const AnnotatedSentence& sentence) {
  std::vector<EntityRun> runs;
  const auto& tokens = sentence.tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (tokens[i].tag.is_outside()) {
      ++i;
      continue;
    }
    // A stray I-X opens a run as well, so ill-formed input is still counted.
    const UnerLabel& label = *tokens[i].tag.label();
    std::size_t j = i + 1;
    while (j < tokens.size() && tokens[j].tag.is_inside() &&
           *tokens[j].tag.label() == label) {
      ++j;
    }
    std::string surface = tokens[i].text;
    for (std::size_t k = i + 1; k < j; ++k) {
      surface.push_back(' ');
      surface += tokens[k].text;
    }
    runs.push_back(EntityRun{i, j, std::move(surface), label});
    i = j;
  }
  return runs;
}

}  // namespace uner
