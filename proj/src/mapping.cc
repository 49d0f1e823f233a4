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

#include "uner/mapping.h"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "uner/text_util.h"

namespace uner {
namespace {

constexpr std::array<std::string_view, 3> kTopLevels = {
    "Name", "Time_Expression", "Numerical_Expression"};

// Calls `on_row(key, value, line_number)` for every non-comment line of a
// two-column TSV.
template <typename OnRow>
void ReadTsv(std::istream& in, std::string_view source, OnRow on_row) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw DataError(std::string(source) + ":" + std::to_string(line_number) +
                      ": expected two tab-separated columns");
    }
    on_row(std::string_view(line).substr(0, tab),
           std::string_view(line).substr(tab + 1), line_number);
  }
  if (in.bad()) {
    throw IoError(std::string(source) + ": read failure", line_number);
  }
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string(), 0);
  return in;
}

std::string Where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

}  // namespace

UnerLabel UnerLabel::Parse(std::string_view text) {
  if (text.empty()) throw LabelParseError("empty UNER label", 0);
  UnerLabel label;
  std::size_t start = 0;
  while (true) {
    const std::size_t hyphen = text.find('-', start);
    const std::string_view segment =
        text.substr(start, hyphen == std::string_view::npos
                               ? std::string_view::npos
                               : hyphen - start);
    if (segment.empty()) {
      throw LabelParseError("empty segment in UNER label '" +
                                std::string(text) + "'",
                            start);
    }
    if (label.levels_.size() == kMaxDepth) {
      throw LabelParseError("UNER label '" + std::string(text) +
                                "' has more than 4 segments",
                            start);
    }
    for (char c : segment) {
      if (static_cast<unsigned char>(c) <= ' ') {
        throw LabelParseError("whitespace in UNER label '" +
                                  std::string(text) + "'",
                              start);
      }
    }
    label.levels_.emplace_back(segment);
    if (hyphen == std::string_view::npos) break;
    start = hyphen + 1;
  }
  if (std::find(kTopLevels.begin(), kTopLevels.end(), label.levels_[0]) ==
      kTopLevels.end()) {
    throw LabelParseError("unknown level-1 segment '" + label.levels_[0] +
                              "' in UNER label",
                          0);
  }
  label.text_ = std::string(text);
  return label;
}

UnerLabel UnerLabel::Truncate(std::size_t depth) const {
  if (depth >= levels_.size()) return *this;
  UnerLabel out;
  out.levels_.assign(levels_.begin(), levels_.begin() + depth);
  out.text_ = JoinStrings(out.levels_, "-");
  return out;
}

bool UnerLabel::HasPrefix(
    std::initializer_list<std::string_view> prefix) const {
  if (prefix.size() > levels_.size()) return false;
  std::size_t i = 0;
  for (std::string_view segment : prefix) {
    if (levels_[i++] != segment) return false;
  }
  return true;
}

EquivalenceMap EquivalenceMap::Load(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return Parse(in, path.string());
}

EquivalenceMap EquivalenceMap::Parse(std::istream& in,
                                     std::string_view source) {
  EquivalenceMap map;
  ReadTsv(in, source, [&](std::string_view cls, std::string_view value,
                          std::size_t line) {
    if (cls.empty()) throw DataError(Where(source, line) + "empty class name");
    std::optional<UnerLabel> label;
    if (value != "NULL") {
      try {
        label = UnerLabel::Parse(value);
      } catch (const LabelParseError& e) {
        throw DataError(Where(source, line) + e.what());
      }
    }
    if (!map.entries_.emplace(std::string(cls), std::move(label)).second) {
      throw DataError(Where(source, line) + "duplicate class " +
                      std::string(cls));
    }
  });
  return map;
}

const std::optional<UnerLabel>* EquivalenceMap::Find(
    std::string_view cls) const {
  auto it = entries_.find(cls);
  return it == entries_.end() ? nullptr : &it->second;
}

std::set<UnerLabel> EquivalenceMap::Labels() const {
  std::set<UnerLabel> labels;
  for (const auto& [cls, label] : entries_) {
    if (label) labels.insert(*label);
  }
  return labels;
}

PriorityMap PriorityMap::Load(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return Parse(in, path.string());
}

PriorityMap PriorityMap::Parse(std::istream& in, std::string_view source) {
  PriorityMap map;
  ReadTsv(in, source, [&](std::string_view cls, std::string_view value,
                          std::size_t line) {
    int priority = 0;
    const auto [end, ec] =
        std::from_chars(value.data(), value.data() + value.size(), priority);
    if (ec != std::errc() || end != value.data() + value.size() ||
        priority < 1) {
      throw DataError(Where(source, line) + "priority must be an integer >= 1");
    }
    if (cls.empty()) throw DataError(Where(source, line) + "empty class name");
    if (!map.entries_.emplace(std::string(cls), priority).second) {
      throw DataError(Where(source, line) + "duplicate class " +
                      std::string(cls));
    }
  });
  return map;
}

std::optional<int> PriorityMap::Find(std::string_view cls) const {
  auto it = entries_.find(cls);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void PriorityMap::Set(std::string cls, int priority) {
  entries_[std::move(cls)] = priority;
}

void CrossValidate(const EquivalenceMap& equivalences,
                   const PriorityMap& priorities) {
  for (const auto& [cls, label] : equivalences.entries()) {
    if (!priorities.Find(cls)) {
      throw DataError("equivalence class " + cls + " has no priority");
    }
  }
  for (const auto& [cls, priority] : priorities.entries()) {
    if (equivalences.Find(cls) == nullptr) {
      throw DataError("priority class " + cls + " has no UNER equivalence");
    }
  }
}

MappingCounters& MappingCounters::operator+=(const MappingCounters& other) {
  classes_without_priority += other.classes_without_priority;
  unknown_classes += other.unknown_classes;
  null_mapped += other.null_mapped;
  return *this;
}

std::optional<std::string> SelectClass(std::span<const std::string> classes,
                                       const PriorityMap& priorities,
                                       MappingCounters* counters) {
  const std::string* best = nullptr;
  int best_priority = 0;
  for (const std::string& cls : classes) {
    const std::optional<int> priority = priorities.Find(cls);
    if (!priority) {
      if (counters) ++counters->classes_without_priority;
      continue;
    }
    // Strict comparison keeps the earliest class among equal priorities.
    if (best == nullptr || *priority > best_priority) {
      best = &cls;
      best_priority = *priority;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::optional<UnerLabel> MapToUner(std::string_view cls,
                                   const EquivalenceMap& equivalences,
                                   MappingCounters* counters) {
  const std::optional<UnerLabel>* label = equivalences.Find(cls);
  if (label == nullptr) {
    if (counters) ++counters->unknown_classes;
    return std::nullopt;
  }
  if (!label->has_value() && counters) ++counters->null_mapped;
  return *label;
}

UnerMapper::UnerMapper(EquivalenceMap equivalences, PriorityMap priorities)
    : equivalences_(std::move(equivalences)),
      priorities_(std::move(priorities)) {
  CrossValidate(equivalences_, priorities_);
}

UnerMapper UnerMapper::Load(const std::filesystem::path& equivalence_path,
                            const std::filesystem::path& priority_path) {
  return UnerMapper(EquivalenceMap::Load(equivalence_path),
                    PriorityMap::Load(priority_path));
}

std::optional<UnerLabel> UnerMapper::Resolve(
    std::span<const std::string> classes, MappingCounters* counters) const {
  const std::optional<std::string> cls =
      SelectClass(classes, priorities_, counters);
  if (!cls) return std::nullopt;
  return MapToUner(*cls, equivalences_, counters);
}

std::array<std::size_t, UnerLabel::kMaxDepth> LevelNodeCounts(
    const EquivalenceMap& equivalences) {
  std::array<std::set<std::string>, UnerLabel::kMaxDepth> nodes;
  for (const UnerLabel& label : equivalences.Labels()) {
    for (std::size_t d = 1; d <= label.depth(); ++d) {
      nodes[d - 1].insert(label.Truncate(d).str());
    }
  }
  std::array<std::size_t, UnerLabel::kMaxDepth> counts{};
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = nodes[i].size();
  return counts;
}

}  // namespace uner
