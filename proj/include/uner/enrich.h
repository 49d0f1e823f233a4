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

#ifndef UNER_ENRICH_H_
#define UNER_ENRICH_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "uner/annotator.h"
#include "uner/mapping.h"

namespace uner {

enum class DictionaryKind { kGlobal, kGlobalMulti, kKgFiltered, kKgFilteredMulti };

std::string_view DictionaryKindName(DictionaryKind kind);

// At least 3 code points and at least one letter.
bool IsEligibleSurface(std::string_view surface);

struct DictionaryEntry {
  std::string surface;
  // Surface split on single spaces; matching happens on these.
  std::vector<std::string> tokens;
  UnerLabel label;
};

// surface -> label. Entries that break the eligibility rules (or, for the
// multi-token kinds, have a single token) are rejected by Add.
class Dictionary {
 public:
  explicit Dictionary(DictionaryKind kind) : kind_(kind) {}

  DictionaryKind kind() const { return kind_; }
  bool multi_token() const {
    return kind_ == DictionaryKind::kGlobalMulti ||
           kind_ == DictionaryKind::kKgFilteredMulti;
  }

  // Returns false (and stores nothing) for an ineligible surface.
  bool Add(std::string surface, UnerLabel label);
  const UnerLabel* Find(std::string_view surface) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, DictionaryEntry, std::less<>>& entries() const {
    return entries_;
  }

  // Application order: longer surface first (code points), then more
  // tokens, then lexicographic.
  std::vector<const DictionaryEntry*> Ordered() const;

  // TSV surface<TAB>label in application order.
  void Save(std::ostream& out) const;
  static Dictionary Parse(std::istream& in, DictionaryKind kind,
                          std::string_view source);

 private:
  DictionaryKind kind_;
  std::map<std::string, DictionaryEntry, std::less<>> entries_;
};

// Modal label for every entity surface of the corpus; ties go to the
// lexicographically smallest label.
Dictionary BuildGlobalDictionary(const AnnotatedCorpus& corpus,
                                 bool multi_token_only);

// Tags every window of O tokens that spells a dictionary surface, longest
// entries first. Existing tags are never changed.
AnnotatedCorpus ApplyDictionary(const AnnotatedCorpus& corpus,
                                const Dictionary& dictionary);

// Per document: the first tagged occurrence of a surface fixes its label and
// later O occurrences in the same document get that label. Left to right,
// longest match.
AnnotatedCorpus ApplyLocalDictionaries(const AnnotatedCorpus& corpus);

// Surface or link target -> knowledge-graph class.
class KgClassMap {
 public:
  void Set(std::string key, std::string cls);
  const std::string* Find(std::string_view key) const;
  std::size_t size() const { return entries_.size(); }

  // TSV key<TAB>class.
  static KgClassMap Parse(std::istream& in, std::string_view source);
  static KgClassMap Load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// Entity surface -> link target it was most often projected from.
using SurfaceTargets = std::map<std::string, std::string, std::less<>>;

SurfaceTargets ParseSurfaceTargets(std::istream& in, std::string_view source);
void SaveSurfaceTargets(const SurfaceTargets& targets, std::ostream& out);

struct KgFilterCounters {
  std::size_t kept = 0;
  std::size_t not_in_kg = 0;
  std::size_t null_mapped = 0;
  std::size_t unknown_class = 0;
};

// Keeps entries present in `kg` (looked up by link target when known, else
// by surface) and relabels them through `equivalences`.
Dictionary FilterByKg(const Dictionary& dictionary, const KgClassMap& kg,
                      const EquivalenceMap& equivalences,
                      const SurfaceTargets* targets = nullptr,
                      KgFilterCounters* counters = nullptr);

struct ExperimentResources {
  const Dictionary* global = nullptr;
  const Dictionary* global_multi = nullptr;
  const Dictionary* kg_filtered = nullptr;
  const Dictionary* kg_filtered_multi = nullptr;
};

inline constexpr int kFirstExperiment = 1;
inline constexpr int kLastExperiment = 7;

// 1 global, 2 global multi-token, 3 local, 4 kg-filtered, 5 kg-filtered
// multi-token, 6 local then kg-filtered, 7 local then kg-filtered multi.
// Throws ConfigError for an unknown id or a missing resource.
AnnotatedCorpus RunExperiment(int id, const AnnotatedCorpus& corpus,
                              const ExperimentResources& resources);

}  // namespace uner

#endif  // UNER_ENRICH_H_
