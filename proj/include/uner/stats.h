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

#ifndef UNER_STATS_H_
#define UNER_STATS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uner/annotator.h"

namespace uner {

struct CoarseCount {
  std::size_t count = 0;
  // count / entity_count, 0 for an empty corpus.
  double share = 0.0;

  bool operator==(const CoarseCount&) const = default;
};

inline constexpr std::string_view kCoarseBuckets[] = {"Person", "Location",
                                                      "Organization"};

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t total_tokens = 0;
  std::size_t non_entity_tokens = 0;
  std::size_t entity_tokens = 0;
  // Number of B tags.
  std::size_t entity_count = 0;
  // Distinct (surface, label) pairs.
  std::size_t distinct_entity_count = 0;
  // Keyed by full tag ("B-<label>", "I-<label>").
  std::map<std::string, std::size_t> per_tag_counts;
  // Person, Location, Organization.
  std::map<std::string, CoarseCount> coarse_counts;

  bool operator==(const CorpusStats&) const = default;
};

// Person: exactly Name-Person-Name. Location / Organization: any label under
// Name-Location / Name-Organization.
std::optional<std::string_view> CoarseBucket(const UnerLabel& label);

struct EntityEntry {
  std::string surface;
  UnerLabel label;

  friend bool operator==(const EntityEntry&, const EntityEntry&) = default;
  friend auto operator<=>(const EntityEntry& a, const EntityEntry& b) {
    if (auto c = a.surface <=> b.surface; c != 0) return c;
    return a.label <=> b.label;
  }
};

// Mergeable accumulator, so documents can be counted in any grouping.
class StatsAccumulator {
 public:
  void Add(const AnnotatedDocument& doc);
  void Merge(const StatsAccumulator& other);
  CorpusStats Finish() const;
  std::vector<EntityEntry> Entities() const;

 private:
  CorpusStats counts_;
  std::set<EntityEntry> entities_;
};

// Throws DataError if a counting identity fails.
CorpusStats ComputeStats(const AnnotatedCorpus& corpus);

// Distinct (surface, label) pairs sorted by surface, then label.
std::vector<EntityEntry> ListEntities(const AnnotatedCorpus& corpus);

// Per-tag counts by descending count, then tag.
std::vector<std::pair<std::string, std::size_t>> SortedTagCounts(
    const CorpusStats& stats);

std::string FormatStatsText(const CorpusStats& stats);
std::string StatsToJson(const CorpusStats& stats);
// surface<TAB>label lines.
std::string FormatEntityList(const std::vector<EntityEntry>& entities);

}  // namespace uner

#endif  // UNER_STATS_H_
