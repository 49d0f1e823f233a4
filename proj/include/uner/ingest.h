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

#ifndef UNER_INGEST_H_
#define UNER_INGEST_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace uner {

// Layout of an extracted encyclopedia dump.
enum class DumpFormat {
  // One JSON object per line with keys id, url, title, text.
  kJsonLines,
  // Extractor doc blocks: <doc id=".." url=".." title="..">BODY</doc>.
  kPlainAnchored,
};

std::optional<DumpFormat> ParseDumpFormat(std::string_view name);

// One article as found in the dump; `markup_text` still carries link markup.
struct RawDocument {
  std::string doc_id;
  std::string title;
  std::string source_url;
  std::string markup_text;
};

// A hyperlink recovered from markup. Offsets are code-point offsets into the
// plain text, [start, end).
struct LinkSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::string target;

  bool operator==(const LinkSpan&) const = default;
};

// Plain text of one article plus its links, sorted and non-overlapping.
struct Document {
  std::string doc_id;
  std::string title;
  std::string text;
  std::vector<LinkSpan> links;

  bool operator==(const Document&) const = default;
};

struct LinkExtraction {
  std::string text;
  std::vector<LinkSpan> links;
  // Unclosed, nested or empty markup that degraded to plain text.
  std::size_t malformed_markup = 0;
  // Targets that carried a "#fragment" which was dropped.
  std::size_t fragments_stripped = 0;
};

// Removes anchor (<a href="T">S</a>) and wiki ([[T|S]], [[T]]) markup,
// returning the plain text and one LinkSpan per recovered link. Anchor
// targets are entity- and percent-decoded. Malformed markup is kept as
// literal text.
LinkExtraction ExtractLinks(std::string_view markup);

Document MakeDocument(const RawDocument& raw, LinkExtraction* extraction);

struct DumpSummary {
  std::size_t lines = 0;
  std::size_t documents = 0;
  std::size_t malformed = 0;
  std::size_t duplicate_ids = 0;
};

// Streams RawDocuments out of a dump in file order. Malformed records are
// skipped and counted; stream failures throw IoError with the line number.
class DumpReader {
 public:
  DumpReader(std::istream& in, DumpFormat format);

  std::optional<RawDocument> Next();

  const DumpSummary& summary() const { return summary_; }

 private:
  std::optional<RawDocument> NextJsonLine();
  std::optional<RawDocument> NextDocBlock();
  bool Accept(const RawDocument& doc);
  bool ReadLine(std::string* line);

  std::istream& in_;
  DumpFormat format_;
  DumpSummary summary_;
  std::unordered_set<std::string> seen_ids_;
};

// Sorted (by code point), duplicate-free set of link targets.
class TargetCollector {
 public:
  void Add(const Document& doc);
  void Add(std::string target);
  std::vector<std::string> Sorted() const;

 private:
  std::set<std::string> targets_;
};

std::vector<std::string> CollectUniqueTargets(
    const std::vector<Document>& documents);

// One target per line.
void WriteTargetList(const std::vector<std::string>& targets,
                     std::ostream& out);
std::vector<std::string> ReadTargetList(std::istream& in);

// Intermediate document store: one JSON object per line with keys
// id, title, text and links ([[start, end, target], ...]).
std::string DocumentToJson(const Document& doc);
Document DocumentFromJson(std::string_view line);

}  // namespace uner

#endif  // UNER_INGEST_H_
