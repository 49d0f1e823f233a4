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

#include "uner/conll.h"

#include <string>

namespace uner {

std::size_t EmitConll(const AnnotatedCorpus& corpus, std::ostream& out) {
  std::size_t bytes = 0;
  std::string buffer;
  auto flush = [&] {
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (!out) throw IoError("CoNLL write failed", bytes);
    bytes += buffer.size();
    buffer.clear();
  };
  for (const AnnotatedDocument& doc : corpus.documents) {
    buffer.append(kDocIdHeader).append(doc.doc_id).push_back('\n');
    for (const AnnotatedSentence& sentence : doc.sentences) {
      for (const AnnotatedToken& token : sentence.tokens) {
        buffer.append(token.text).push_back('\t');
        buffer.append(token.tag.ToString()).push_back('\n');
      }
      buffer.push_back('\n');
    }
    if (buffer.size() >= (1u << 16)) flush();
  }
  flush();
  return bytes;
}

AnnotatedCorpus ParseConll(std::istream& in, std::string_view source,
                           ConllLines* lines) {
  AnnotatedCorpus corpus;
  ConllLines local;
  AnnotatedSentence sentence;
  std::vector<std::size_t> sentence_lines;
  bool in_document = false;

  auto close_sentence = [&] {
    if (sentence.tokens.empty()) return;
    if (!in_document) {
      corpus.documents.emplace_back();
      local.tokens.emplace_back();
      in_document = true;
    }
    corpus.documents.back().sentences.push_back(std::move(sentence));
    local.tokens.back().push_back(std::move(sentence_lines));
    sentence = {};
    sentence_lines = {};
  };

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      close_sentence();
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      if (line.rfind(kDocIdHeader, 0) == 0) {
        close_sentence();
        corpus.documents.push_back(
            AnnotatedDocument{line.substr(kDocIdHeader.size()), {}});
        local.tokens.emplace_back();
        local.has_doc_ids = true;
        in_document = true;
        continue;
      }
      if (line[0] == '#') continue;
      throw DataError(std::string(source) + ":" + std::to_string(line_number) +
                      ": expected token<TAB>tag");
    }
    if (tab == 0 || line.find('\t', tab + 1) != std::string::npos) {
      throw DataError(std::string(source) + ":" + std::to_string(line_number) +
                      ": expected token<TAB>tag");
    }
    try {
      sentence.tokens.push_back(AnnotatedToken{
          line.substr(0, tab), IobTag::Parse(std::string_view(line).substr(tab + 1))});
    } catch (const DataError& e) {
      throw DataError(std::string(source) + ":" + std::to_string(line_number) +
                      ": " + e.what());
    }
    sentence_lines.push_back(line_number);
  }
  if (in.bad()) {
    throw IoError(std::string(source) + ": read failure", line_number);
  }
  close_sentence();
  if (lines != nullptr) *lines = std::move(local);
  return corpus;
}

}  // namespace uner
