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

#ifndef UNER_CONLL_H_
#define UNER_CONLL_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "uner/annotator.h"

// CoNLL layout: "# doc_id = <id>" opens a document, each token is a
// "text<TAB>tag" line, a blank line closes a sentence. LF only.

namespace uner {

inline constexpr std::string_view kDocIdHeader = "# doc_id = ";

// Writes `corpus`; returns the number of bytes written. Throws IoError with
// the byte position on a failed write.
std::size_t EmitConll(const AnnotatedCorpus& corpus, std::ostream& out);

// Line numbers (1-based) of each token, parallel to the parsed corpus.
struct ConllLines {
  std::vector<std::vector<std::vector<std::size_t>>> tokens;
  // Whether the file carried doc_id headers at all.
  bool has_doc_ids = false;
};

// Inverse of EmitConll. Tokens before any header go to a document with an
// empty id. Other "#" lines are comments. Throws DataError with the line
// number on a malformed line.
AnnotatedCorpus ParseConll(std::istream& in, std::string_view source,
                           ConllLines* lines = nullptr);

}  // namespace uner

#endif  // UNER_CONLL_H_
