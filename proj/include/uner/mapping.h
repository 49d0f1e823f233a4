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

#ifndef UNER_MAPPING_H_
#define UNER_MAPPING_H_

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uner/error.h"

namespace uner {

// Raised by UnerLabel::Parse. `position` is the character offset of the
// offending segment in the input.
class LabelParseError : public DataError {
 public:
  LabelParseError(const std::string& what, std::size_t position)
      : DataError(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A UNER label: 1 to 4 hyphen-joined segments below the implicit root, the
// first of which is Name, Time_Expression or Numerical_Expression.
class UnerLabel {
 public:
  static constexpr std::size_t kMaxDepth = 4;

  static UnerLabel Parse(std::string_view text);

  const std::vector<std::string>& levels() const { return levels_; }
  std::size_t depth() const { return levels_.size(); }
  const std::string& str() const { return text_; }

  // Keeps the first `depth` segments (no-op when already shallower).
  UnerLabel Truncate(std::size_t depth) const;

  // True if the leading segments equal `prefix`.
  bool HasPrefix(std::initializer_list<std::string_view> prefix) const;

  friend bool operator==(const UnerLabel& a, const UnerLabel& b) {
    return a.text_ == b.text_;
  }
  friend std::strong_ordering operator<=>(const UnerLabel& a,
                                          const UnerLabel& b) {
    return a.text_ <=> b.text_;
  }

 private:
  UnerLabel() = default;

  std::vector<std::string> levels_;
  std::string text_;
};

// DBpedia class -> UNER label, or NULL (never annotate).
class EquivalenceMap {
 public:
  static EquivalenceMap Load(const std::filesystem::path& path);
  static EquivalenceMap Parse(std::istream& in, std::string_view source);

  // nullptr if the class is absent; a pointer to nullopt if it maps to NULL.
  const std::optional<UnerLabel>* Find(std::string_view cls) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::optional<UnerLabel>, std::less<>>&
  entries() const {
    return entries_;
  }

  // Distinct non-NULL labels.
  std::set<UnerLabel> Labels() const;

 private:
  std::map<std::string, std::optional<UnerLabel>, std::less<>> entries_;
};

// DBpedia class -> priority (>= 1, higher is more specific).
class PriorityMap {
 public:
  static PriorityMap Load(const std::filesystem::path& path);
  static PriorityMap Parse(std::istream& in, std::string_view source);

  std::optional<int> Find(std::string_view cls) const;
  void Set(std::string cls, int priority);
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, int, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, int, std::less<>> entries_;
};

// Both tables must cover the same classes; throws DataError naming the
// first class missing on either side.
void CrossValidate(const EquivalenceMap& equivalences,
                   const PriorityMap& priorities);

struct MappingCounters {
  // Classes seen in a class list that have no priority entry.
  std::size_t classes_without_priority = 0;
  // Selected classes absent from the equivalence map.
  std::size_t unknown_classes = 0;
  // Selected classes mapped to NULL.
  std::size_t null_mapped = 0;

  MappingCounters& operator+=(const MappingCounters& other);
};

// Highest-priority class; ties go to the earliest in `classes`. Classes
// without a priority are skipped.
std::optional<std::string> SelectClass(std::span<const std::string> classes,
                                       const PriorityMap& priorities,
                                       MappingCounters* counters = nullptr);

std::optional<UnerLabel> MapToUner(std::string_view cls,
                                   const EquivalenceMap& equivalences,
                                   MappingCounters* counters = nullptr);

// Both tables together, cross-validated at construction.
class UnerMapper {
 public:
  UnerMapper(EquivalenceMap equivalences, PriorityMap priorities);

  static UnerMapper Load(const std::filesystem::path& equivalence_path,
                         const std::filesystem::path& priority_path);

  std::optional<UnerLabel> Resolve(std::span<const std::string> classes,
                                   MappingCounters* counters = nullptr) const;

  const EquivalenceMap& equivalences() const { return equivalences_; }
  const PriorityMap& priorities() const { return priorities_; }

 private:
  EquivalenceMap equivalences_;
  PriorityMap priorities_;
};

// Distinct nodes at levels 1..4 across all labels of the map.
std::array<std::size_t, UnerLabel::kMaxDepth> LevelNodeCounts(
    const EquivalenceMap& equivalences);

}  // namespace uner

#endif  // UNER_MAPPING_H_
