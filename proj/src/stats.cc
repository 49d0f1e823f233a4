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

#include "uner/stats.h"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

namespace uner {

std::optional<std::string_view> CoarseBucket(const UnerLabel& label) {
  if (label.str() == "Name-Person-Name") return kCoarseBuckets[0];
  if (label.HasPrefix({"Name", "Location"})) return kCoarseBuckets[1];
  if (label.HasPrefix({"Name", "Organization"})) return kCoarseBuckets[2];
  return std::nullopt;
}

void StatsAccumulator::Add(const AnnotatedDocument& doc) {
  ++counts_.documents;
  for (const AnnotatedSentence& sentence : doc.sentences) {
    ++counts_.sentences;
    for (const AnnotatedToken& token : sentence.tokens) {
      ++counts_.total_tokens;
      if (token.tag.is_outside()) {
        ++counts_.non_entity_tokens;
        continue;
      }
      ++counts_.entity_tokens;
      ++counts_.per_tag_counts[token.tag.ToString()];
      if (token.tag.is_begin()) {
        ++counts_.entity_count;
        if (auto bucket = CoarseBucket(*token.tag.label())) {
          ++counts_.coarse_counts[std::string(*bucket)].count;
        }
      }
    }
    for (EntityRun& run : ExtractEntities(sentence)) {
      entities_.insert(EntityEntry{std::move(run.surface), run.label});
    }
  }
}

void StatsAccumulator::Merge(const StatsAccumulator& other) {
  const CorpusStats& o = other.counts_;
  counts_.documents += o.documents;
  counts_.sentences += o.sentences;
  counts_.total_tokens += o.total_tokens;
  counts_.non_entity_tokens += o.non_entity_tokens;
  counts_.entity_tokens += o.entity_tokens;
  counts_.entity_count += o.entity_count;
  for (const auto& [tag, n] : o.per_tag_counts) counts_.per_tag_counts[tag] += n;
  for (const auto& [bucket, c] : o.coarse_counts) {
    counts_.coarse_counts[bucket].count += c.count;
  }
  entities_.insert(other.entities_.begin(), other.entities_.end());
}

CorpusStats StatsAccumulator::Finish() const {
  CorpusStats stats = counts_;
  stats.distinct_entity_count = entities_.size();
  for (std::string_view bucket : kCoarseBuckets) {
    CoarseCount& c = stats.coarse_counts[std::string(bucket)];
    c.share = stats.entity_count == 0
                  ? 0.0
                  : static_cast<double>(c.count) /
                        static_cast<double>(stats.entity_count);
  }
  if (stats.total_tokens != stats.entity_tokens + stats.non_entity_tokens ||
      stats.entity_count > stats.entity_tokens) {
    throw DataError("corpus statistics identity violated");
  }
  return stats;
}

std::vector<EntityEntry> StatsAccumulator::Entities() const {
  return {entities_.begin(), entities_.end()};
}

CorpusStats ComputeStats(const AnnotatedCorpus& corpus) {
  StatsAccumulator acc;
  for (const AnnotatedDocument& doc : corpus.documents) acc.Add(doc);
  return acc.Finish();
}

std::vector<EntityEntry> ListEntities(const AnnotatedCorpus& corpus) {
  StatsAccumulator acc;
  for (const AnnotatedDocument& doc : corpus.documents) acc.Add(doc);
  return acc.Entities();
}

std::vector<std::pair<std::string, std::size_t>> SortedTagCounts(
    const CorpusStats& stats) {
  std::vector<std::pair<std::string, std::size_t>> rows(
      stats.per_tag_counts.begin(), stats.per_tag_counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  return rows;
}

std::string FormatStatsText(const CorpusStats& stats) {
  std::string out;
  char buf[256];
  auto line = [&](const char* name, std::size_t value) {
    std::snprintf(buf, sizeof buf, "%-24s %zu\n", name, value);
    out += buf;
  };
  line("documents", stats.documents);
  line("sentences", stats.sentences);
  line("total_tokens", stats.total_tokens);
  line("non_entity_tokens", stats.non_entity_tokens);
  line("entity_tokens", stats.entity_tokens);
  line("entities", stats.entity_count);
  line("distinct_entities", stats.distinct_entity_count);
  out += "\ncoarse classes\n";
  for (std::string_view bucket : kCoarseBuckets) {
    const CoarseCount& c = stats.coarse_counts.at(std::string(bucket));
    std::snprintf(buf, sizeof buf, "%-24s %zu (%.1f%%)\n",
                  std::string(bucket).c_str(), c.count, c.share * 100.0);
    out += buf;
  }
  out += "\nper-tag counts\n";
  for (const auto& [tag, n] : SortedTagCounts(stats)) {
    out += std::to_string(n) + "\t" + tag + "\n";
  }
  return out;
}

std::string StatsToJson(const CorpusStats& stats) {
  nlohmann::ordered_json j;
  j["documents"] = stats.documents;
  j["sentences"] = stats.sentences;
  j["total_tokens"] = stats.total_tokens;
  j["non_entity_tokens"] = stats.non_entity_tokens;
  j["entity_tokens"] = stats.entity_tokens;
  j["entity_count"] = stats.entity_count;
  j["distinct_entity_count"] = stats.distinct_entity_count;
  nlohmann::ordered_json coarse = nlohmann::ordered_json::object();
  for (std::string_view bucket : kCoarseBuckets) {
    const CoarseCount& c = stats.coarse_counts.at(std::string(bucket));
    coarse[std::string(bucket)] = {{"count", c.count}, {"share", c.share}};
  }
  j["coarse_counts"] = std::move(coarse);
  nlohmann::ordered_json tags = nlohmann::ordered_json::array();
  for (const auto& [tag, n] : SortedTagCounts(stats)) {
    tags.push_back({{"tag", tag}, {"count", n}});
  }
  j["per_tag_counts"] = std::move(tags);
  return j.dump(2) + "\n";
}

std::string FormatEntityList(const std::vector<EntityEntry>& entities) {
  std::string out;
  for (const EntityEntry& e : entities) {
    out += e.surface + "\t" + e.label.str() + "\n";
  }
  return out;
}

}  // namespace uner
