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

#include "uner/ingest.h"

#include <algorithm>
#include <regex>

#include "json.hpp"
#include "uner/error.h"
#include "uner/text_util.h"
#include "uner/unicode.h"

namespace uner {
namespace {

using json = nlohmann::json;

constexpr std::string_view kAnchorOpen = "<a href=\"";
constexpr std::string_view kAnchorClose = "</a>";
constexpr std::string_view kWikiOpen = "[[";
constexpr std::string_view kWikiClose = "]]";

bool At(std::string_view text, std::size_t pos, std::string_view token) {
  return text.substr(pos, token.size()) == token;
}

// Position of the closer matching an opener whose body starts at `from`,
// counting nested openers of the same kind. npos when unbalanced.
std::size_t FindCloser(std::string_view text, std::size_t from,
                       std::string_view opener, std::string_view closer) {
  int depth = 1;
  std::size_t j = from;
  while (j < text.size()) {
    if (At(text, j, opener)) {
      ++depth;
      j += opener.size();
    } else if (At(text, j, closer)) {
      if (--depth == 0) return j;
      j += closer.size();
    } else {
      ++j;
    }
  }
  return std::string_view::npos;
}

bool ContainsOpener(std::string_view s) {
  return s.find(kAnchorOpen) != std::string_view::npos ||
         s.find(kWikiOpen) != std::string_view::npos;
}

// Plain-text accumulator that tracks its length in code points.
class TextBuilder {
 public:
  void Append(std::string_view s) {
    text_.append(s);
    length_ += CodePointLength(s);
  }
  std::size_t length() const { return length_; }
  std::string Release() { return std::move(text_); }

 private:
  std::string text_;
  std::size_t length_ = 0;
};

std::string CleanTarget(std::string_view raw, std::size_t* fragments) {
  const std::size_t hash = raw.find('#');
  if (hash != std::string_view::npos) {
    ++*fragments;
    raw = raw.substr(0, hash);
  }
  return TrimWhitespace(raw);
}

}  // namespace

std::optional<DumpFormat> ParseDumpFormat(std::string_view name) {
  if (name == "json_lines") return DumpFormat::kJsonLines;
  if (name == "plain_anchored") return DumpFormat::kPlainAnchored;
  return std::nullopt;
}

LinkExtraction ExtractLinks(std::string_view markup) {
  LinkExtraction result;
  TextBuilder out;
  std::size_t i = 0;
  const std::size_t n = markup.size();
  std::size_t literal_start = 0;

  auto flush_literal = [&](std::size_t upto) {
    if (upto > literal_start) {
      out.Append(markup.substr(literal_start, upto - literal_start));
    }
  };

  while (i < n) {
    std::string target;
    std::string_view surface;
    std::size_t next = 0;
    if (At(markup, i, kAnchorOpen)) {
      const std::size_t quote = markup.find('"', i + kAnchorOpen.size());
      if (quote == std::string_view::npos || quote + 1 >= n ||
          markup[quote + 1] != '>') {
        ++i;  // Not an opener after all; '<' stays literal.
        continue;
      }
      const std::size_t body = quote + 2;
      const std::size_t close =
          FindCloser(markup, body, kAnchorOpen, kAnchorClose);
      if (close == std::string_view::npos) {
        ++result.malformed_markup;
        i = body;  // Unclosed: the opener stays in the literal run.
        continue;
      }
      next = close + kAnchorClose.size();
      surface = markup.substr(body, close - body);
      if (ContainsOpener(surface)) {
        ++result.malformed_markup;
        i = next;
        continue;
      }
      const std::string_view raw =
          markup.substr(i + kAnchorOpen.size(), quote - i - kAnchorOpen.size());
      target = CleanTarget(PercentDecode(UnescapeHtmlEntities(raw)),
                           &result.fragments_stripped);
    } else if (At(markup, i, kWikiOpen)) {
      const std::size_t body = i + kWikiOpen.size();
      const std::size_t close =
          FindCloser(markup, body, kWikiOpen, kWikiClose);
      if (close == std::string_view::npos) {
        ++result.malformed_markup;
        i = body;
        continue;
      }
      next = close + kWikiClose.size();
      const std::string_view content = markup.substr(body, close - body);
      if (ContainsOpener(content)) {
        ++result.malformed_markup;
        i = next;
        continue;
      }
      std::string_view raw = content;
      surface = content;
      if (const std::size_t bar = content.find('|');
          bar != std::string_view::npos) {
        raw = content.substr(0, bar);
        surface = content.substr(bar + 1);
        if (surface.empty()) surface = raw;
      }
      target = CleanTarget(raw, &result.fragments_stripped);
    } else {
      ++i;
      continue;
    }

    flush_literal(i);
    literal_start = next;
    i = next;
    if (surface.empty()) {
      ++result.malformed_markup;
      continue;
    }
    const std::size_t start = out.length();
    out.Append(surface);
    if (target.empty()) {
      ++result.malformed_markup;
      continue;
    }
    result.links.push_back(
        LinkSpan{start, out.length(), std::string(surface), std::move(target)});
  }
  flush_literal(n);
  result.text = out.Release();
  return result;
}

Document MakeDocument(const RawDocument& raw, LinkExtraction* extraction) {
  LinkExtraction local = ExtractLinks(raw.markup_text);
  Document doc{raw.doc_id, raw.title, local.text, local.links};
  if (extraction != nullptr) *extraction = std::move(local);
  return doc;
}

DumpReader::DumpReader(std::istream& in, DumpFormat format)
    : in_(in), format_(format) {}

bool DumpReader::ReadLine(std::string* line) {
  if (!std::getline(in_, *line)) {
    if (in_.bad()) {
      throw IoError("read failure in dump at line " +
                        std::to_string(summary_.lines + 1),
                    summary_.lines + 1);
    }
    return false;
  }
  ++summary_.lines;
  if (!line->empty() && line->back() == '\r') line->pop_back();
  return true;
}

bool DumpReader::Accept(const RawDocument& doc) {
  if (doc.doc_id.empty() || !IsValidUtf8(doc.markup_text) ||
      !IsValidUtf8(doc.title)) {
    ++summary_.malformed;
    return false;
  }
  if (!seen_ids_.insert(doc.doc_id).second) {
    ++summary_.duplicate_ids;
    ++summary_.malformed;
    return false;
  }
  ++summary_.documents;
  return true;
}

std::optional<RawDocument> DumpReader::Next() {
  return format_ == DumpFormat::kJsonLines ? NextJsonLine() : NextDocBlock();
}

std::optional<RawDocument> DumpReader::NextJsonLine() {
  std::string line;
  while (ReadLine(&line)) {
    if (TrimWhitespace(line).empty()) continue;
    const json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!obj.is_object()) {
      ++summary_.malformed;
      continue;
    }
    auto field = [&](const char* key) -> std::optional<std::string> {
      auto it = obj.find(key);
      if (it == obj.end()) return std::nullopt;
      if (it->is_string()) return it->get<std::string>();
      if (it->is_number_integer()) return std::to_string(it->get<long long>());
      return std::nullopt;
    };
    auto id = field("id");
    auto title = field("title");
    auto text = field("text");
    if (!id || !title || !text) {
      ++summary_.malformed;
      continue;
    }
    RawDocument doc{std::move(*id), std::move(*title),
                    field("url").value_or(""), std::move(*text)};
    if (Accept(doc)) return doc;
  }
  return std::nullopt;
}

std::optional<RawDocument> DumpReader::NextDocBlock() {
  static const std::regex kAttr(R"re((\w+)="([^"]*)")re");
  std::string line;
  std::optional<RawDocument> open;
  std::string body;
  while (ReadLine(&line)) {
    if (line.rfind("<doc ", 0) == 0 || line == "<doc>") {
      if (open) ++summary_.malformed;  // Previous block never closed.
      open = RawDocument{};
      body.clear();
      for (auto it = std::sregex_iterator(line.begin(), line.end(), kAttr);
           it != std::sregex_iterator(); ++it) {
        const std::string key = (*it)[1];
        std::string value = UnescapeHtmlEntities((*it)[2].str());
        if (key == "id") open->doc_id = std::move(value);
        else if (key == "url") open->source_url = std::move(value);
        else if (key == "title") open->title = std::move(value);
      }
      continue;
    }
    if (line == "</doc>") {
      if (!open) {
        ++summary_.malformed;
        continue;
      }
      // Drop the newline that ends the last body line.
      if (!body.empty() && body.back() == '\n') body.pop_back();
      RawDocument doc = std::move(*open);
      open.reset();
      doc.markup_text = std::move(body);
      body.clear();
      if (Accept(doc)) return doc;
      continue;
    }
    if (open) {
      body.append(line);
      body.push_back('\n');
    } else if (!TrimWhitespace(line).empty()) {
      ++summary_.malformed;
    }
  }
  if (open) ++summary_.malformed;
  return std::nullopt;
}

void TargetCollector::Add(const Document& doc) {
  for (const LinkSpan& link : doc.links) targets_.insert(link.target);
}

void TargetCollector::Add(std::string target) {
  targets_.insert(std::move(target));
}

std::vector<std::string> TargetCollector::Sorted() const {
  // std::string compares bytes as unsigned char, which orders UTF-8 by code
  // point.
  return {targets_.begin(), targets_.end()};
}

std::vector<std::string> CollectUniqueTargets(
    const std::vector<Document>& documents) {
  TargetCollector collector;
  for (const Document& doc : documents) collector.Add(doc);
  return collector.Sorted();
}

void WriteTargetList(const std::vector<std::string>& targets,
                     std::ostream& out) {
  for (const std::string& t : targets) out << t << '\n';
}

std::vector<std::string> ReadTargetList(std::istream& in) {
  std::vector<std::string> targets;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) targets.push_back(line);
  }
  return targets;
}

std::string DocumentToJson(const Document& doc) {
  json links = json::array();
  for (const LinkSpan& link : doc.links) {
    links.push_back(json::array({link.start, link.end, link.target}));
  }
  json obj = {{"id", doc.doc_id},
              {"title", doc.title},
              {"text", doc.text},
              {"links", std::move(links)}};
  return obj.dump();
}

Document DocumentFromJson(std::string_view line) {
  const json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!obj.is_object() || !obj.contains("id") || !obj.contains("text") ||
      !obj.contains("links")) {
    throw DataError("malformed document record");
  }
  Document doc;
  try {
    doc.doc_id = obj.at("id").get<std::string>();
    doc.title = obj.value("title", "");
    doc.text = obj.at("text").get<std::string>();
    const std::u32string text = DecodeUtf8Lossy(doc.text);
    std::size_t previous_end = 0;
    for (const json& link : obj.at("links")) {
      LinkSpan span;
      span.start = link.at(0).get<std::size_t>();
      span.end = link.at(1).get<std::size_t>();
      span.target = link.at(2).get<std::string>();
      if (span.start >= span.end || span.end > text.size() ||
          span.start < previous_end || span.target.empty()) {
        throw DataError("invalid link span in document " + doc.doc_id);
      }
      previous_end = span.end;
      span.surface = EncodeUtf8(
          std::u32string_view(text).substr(span.start, span.end - span.start));
      doc.links.push_back(std::move(span));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed document record: ") + e.what());
  }
  return doc;
}

}  // namespace uner
