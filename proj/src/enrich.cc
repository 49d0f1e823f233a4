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

#include "uner/enrich.h"

#include <algorithm>
#include <fstream>
#include <tuple>
#include <unordered_map>

#include "uner/text_util.h"
#include "uner/unicode.h"

namespace uner {
namespace {

// Token-sequence trie; each terminal node stores the index of its entry.
class TokenTrie {
 public:
  TokenTrie() : nodes_(1) {}

  void Insert(const std::vector<std::string>& tokens, std::size_t value) {
    std::size_t node = 0;
    for (const std::string& token : tokens) {
      auto [it, inserted] = nodes_[node].children.try_emplace(token, 0);
      if (inserted) {
        it->second = nodes_.size();
        nodes_.emplace_back();
      }
      node = it->second;
    }
    nodes_[node].value = value;
  }

  // Calls on_match(length, value) for every entry spelled by tokens[start..]
  // whose tokens are all untagged.
  template <typename OnMatch>
  void MatchUntagged(const std::vector<AnnotatedToken>& tokens,
                     std::size_t start, OnMatch on_match) const {
    std::size_t node = 0;
    for (std::size_t i = start; i < tokens.size(); ++i) {
      if (!tokens[i].tag.is_outside()) return;
      const auto& children = nodes_[node].children;
      auto it = children.find(tokens[i].text);
      if (it == children.end()) return;
      node = it->second;
      if (nodes_[node].value) on_match(i + 1 - start, *nodes_[node].value);
    }
  }

 private:
  struct Node {
    std::unordered_map<std::string, std::size_t> children;
    std::optional<std::size_t> value;
  };
  std::vector<Node> nodes_;
};

void TagRun(std::vector<AnnotatedToken>& tokens, std::size_t start,
            std::size_t length, const UnerLabel& label) {
  tokens[start].tag = IobTag::Begin(label);
  for (std::size_t k = start + 1; k < start + length; ++k) {
    tokens[k].tag = IobTag::Inside(label);
  }
}

std::vector<std::string> SurfaceTokens(std::string_view surface) {
  return SplitString(surface, ' ');
}

std::string Where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

// Calls on_row(key, value, line) for each data line of a two-column TSV.
template <typename OnRow>
void ReadPairs(std::istream& in, std::string_view source, OnRow on_row) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw DataError(Where(source, n) + "expected two tab-separated columns");
    }
    on_row(line.substr(0, tab), line.substr(tab + 1), n);
  }
  if (in.bad()) throw IoError(std::string(source) + ": read failure", n);
}

}  // namespace

std::string_view DictionaryKindName(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::kGlobal:
      return "global";
    case DictionaryKind::kGlobalMulti:
      return "global_multi";
    case DictionaryKind::kKgFiltered:
      return "kg_filtered";
    case DictionaryKind::kKgFilteredMulti:
      return "kg_filtered_multi";
  }
  return "unknown";
}

bool IsEligibleSurface(std::string_view surface) {
  const std::optional<std::u32string> chars = DecodeUtf8(surface);
  if (!chars || chars->size() < 3) return false;
  return std::any_of(chars->begin(), chars->end(), IsLetter);
}

bool Dictionary::Add(std::string surface, UnerLabel label) {
  if (!IsEligibleSurface(surface)) return false;
  std::vector<std::string> tokens = SurfaceTokens(surface);
  if (std::any_of(tokens.begin(), tokens.end(),
                  [](const std::string& t) { return t.empty(); })) {
    return false;
  }
  if (multi_token() && tokens.size() < 2) return false;
  std::string key = surface;
  entries_.insert_or_assign(
      std::move(key),
      DictionaryEntry{std::move(surface), std::move(tokens), std::move(label)});
  return true;
}

const UnerLabel* Dictionary::Find(std::string_view surface) const {
  auto it = entries_.find(surface);
  return it == entries_.end() ? nullptr : &it->second.label;
}

std::vector<const DictionaryEntry*> Dictionary::Ordered() const {
  std::vector<std::tuple<std::size_t, std::size_t, const DictionaryEntry*>> keyed;
  keyed.reserve(entries_.size());
  for (const auto& [surface, entry] : entries_) {
    keyed.emplace_back(CodePointLength(surface), entry.tokens.size(), &entry);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
    return std::get<2>(a)->surface < std::get<2>(b)->surface;
  });
  std::vector<const DictionaryEntry*> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(std::get<2>(k));
  return out;
}

void Dictionary::Save(std::ostream& out) const {
  out << "# " << DictionaryKindName(kind_) << " dictionary: surface<TAB>label\n";
  for (const DictionaryEntry* entry : Ordered()) {
    out << entry->surface << '\t' << entry->label.str() << '\n';
  }
}

Dictionary Dictionary::Parse(std::istream& in, DictionaryKind kind,
                             std::string_view source) {
  Dictionary dict(kind);
  ReadPairs(in, source, [&](std::string surface, std::string label,
                            std::size_t line) {
    if (dict.Find(surface) != nullptr) {
      throw DataError(Where(source, line) + "duplicate surface " + surface);
    }
    UnerLabel parsed = [&] {
      try {
        return UnerLabel::Parse(label);
      } catch (const DataError& e) {
        throw DataError(Where(source, line) + e.what());
      }
    }();
    if (!dict.Add(surface, std::move(parsed))) {
      throw DataError(Where(source, line) + "ineligible surface " + surface);
    }
  });
  return dict;
}

Dictionary BuildGlobalDictionary(const AnnotatedCorpus& corpus,
                                 bool multi_token_only) {
  std::map<std::string, std::map<UnerLabel, std::size_t>> votes;
  for (const AnnotatedDocument& doc : corpus.documents) {
    for (const AnnotatedSentence& sentence : doc.sentences) {
      for (EntityRun& run : ExtractEntities(sentence)) {
        ++votes[std::move(run.surface)][run.label];
      }
    }
  }
  Dictionary dict(multi_token_only ? DictionaryKind::kGlobalMulti
                                   : DictionaryKind::kGlobal);
  for (auto& [surface, counts] : votes) {
    // std::map iterates labels in ascending order, so the first maximum is
    // the lexicographically smallest.
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    dict.Add(surface, best->first);
  }
  return dict;
}

AnnotatedCorpus ApplyDictionary(const AnnotatedCorpus& corpus,
                                const Dictionary& dictionary) {
  AnnotatedCorpus out = corpus;
  if (dictionary.empty()) return out;
  const std::vector<const DictionaryEntry*> ordered = dictionary.Ordered();
  TokenTrie trie;
  for (std::size_t rank = 0; rank < ordered.size(); ++rank) {
    trie.Insert(ordered[rank]->tokens, rank);
  }

  struct Candidate {
    std::size_t rank;
    std::size_t start;
    std::size_t length;
  };
  std::vector<Candidate> candidates;
  for (AnnotatedDocument& doc : out.documents) {
    for (AnnotatedSentence& sentence : doc.sentences) {
      auto& tokens = sentence.tokens;
      candidates.clear();
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        trie.MatchUntagged(tokens, i, [&](std::size_t length, std::size_t rank) {
          candidates.push_back({rank, i, length});
        });
      }
      // Same result as applying entries one at a time in application order,
      // each scanning left to right.
      std::sort(candidates.begin(), candidates.end(),
                [](const Candidate& a, const Candidate& b) {
                  return std::tie(a.rank, a.start) < std::tie(b.rank, b.start);
                });
      for (const Candidate& c : candidates) {
        const bool free = std::all_of(
            tokens.begin() + c.start, tokens.begin() + c.start + c.length,
            [](const AnnotatedToken& t) { return t.tag.is_outside(); });
        if (free) TagRun(tokens, c.start, c.length, ordered[c.rank]->label);
      }
    }
  }
  return out;
}

AnnotatedCorpus ApplyLocalDictionaries(const AnnotatedCorpus& corpus) {
  AnnotatedCorpus out = corpus;
  for (AnnotatedDocument& doc : out.documents) {
    TokenTrie trie;
    std::vector<UnerLabel> labels;
    std::unordered_map<std::string, std::size_t> known;
    for (AnnotatedSentence& sentence : doc.sentences) {
      auto& tokens = sentence.tokens;
      std::size_t i = 0;
      while (i < tokens.size()) {
        if (!tokens[i].tag.is_outside()) {
          const UnerLabel label = *tokens[i].tag.label();
          std::size_t j = i + 1;
          while (j < tokens.size() && tokens[j].tag.is_inside() &&
                 *tokens[j].tag.label() == label) {
            ++j;
          }
          std::vector<std::string> run;
          for (std::size_t k = i; k < j; ++k) run.push_back(tokens[k].text);
          std::string surface = JoinStrings(run, " ");
          if (IsEligibleSurface(surface) && !known.contains(surface)) {
            known.emplace(std::move(surface), labels.size());
            trie.Insert(run, labels.size());
            labels.push_back(label);
          }
          i = j;
          continue;
        }
        std::size_t best_length = 0;
        std::size_t best_value = 0;
        trie.MatchUntagged(tokens, i, [&](std::size_t length, std::size_t value) {
          best_length = length;
          best_value = value;
        });
        if (best_length == 0) {
          ++i;
          continue;
        }
        TagRun(tokens, i, best_length, labels[best_value]);
        i += best_length;
      }
    }
  }
  return out;
}

void KgClassMap::Set(std::string key, std::string cls) {
  entries_.insert_or_assign(std::move(key), std::move(cls));
}

const std::string* KgClassMap::Find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

KgClassMap KgClassMap::Parse(std::istream& in, std::string_view source) {
  KgClassMap kg;
  ReadPairs(in, source, [&](std::string key, std::string cls, std::size_t line) {
    if (kg.Find(key) != nullptr) {
      throw DataError(Where(source, line) + "duplicate key " + key);
    }
    kg.Set(std::move(key), std::move(cls));
  });
  return kg;
}

KgClassMap KgClassMap::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string(), 0);
  return Parse(in, path.string());
}

SurfaceTargets ParseSurfaceTargets(std::istream& in, std::string_view source) {
  SurfaceTargets targets;
  ReadPairs(in, source, [&](std::string surface, std::string target,
                            std::size_t line) {
    if (!targets.emplace(std::move(surface), std::move(target)).second) {
      throw DataError(Where(source, line) + "duplicate surface");
    }
  });
  return targets;
}

void SaveSurfaceTargets(const SurfaceTargets& targets, std::ostream& out) {
  out << "# surface<TAB>link target\n";
  for (const auto& [surface, target] : targets) {
    out << surface << '\t' << target << '\n';
  }
}

Dictionary FilterByKg(const Dictionary& dictionary, const KgClassMap& kg,
                      const EquivalenceMap& equivalences,
                      const SurfaceTargets* targets,
                      KgFilterCounters* counters) {
  KgFilterCounters local;
  Dictionary out(dictionary.multi_token() ? DictionaryKind::kKgFilteredMulti
                                          : DictionaryKind::kKgFiltered);
  for (const auto& [surface, entry] : dictionary.entries()) {
    const std::string* cls = nullptr;
    if (targets != nullptr) {
      if (auto it = targets->find(surface); it != targets->end()) {
        cls = kg.Find(it->second);
      }
    }
    if (cls == nullptr) cls = kg.Find(surface);
    if (cls == nullptr) {
      ++local.not_in_kg;
      continue;
    }
    const std::optional<UnerLabel>* label = equivalences.Find(*cls);
    if (label == nullptr) {
      ++local.unknown_class;
    } else if (!label->has_value()) {
      ++local.null_mapped;
    } else if (out.Add(surface, **label)) {
      ++local.kept;
    }
  }
  if (counters != nullptr) *counters = local;
  return out;
}

AnnotatedCorpus RunExperiment(int id, const AnnotatedCorpus& corpus,
                              const ExperimentResources& resources) {
  auto need = [id](const Dictionary* dict, const char* what) -> const Dictionary& {
    if (dict == nullptr) {
      throw ConfigError("experiment " + std::to_string(id) + " needs the " +
                        what + " dictionary");
    }
    return *dict;
  };
  switch (id) {
    case 1:
      return ApplyDictionary(corpus, need(resources.global, "global"));
    case 2:
      return ApplyDictionary(corpus,
                             need(resources.global_multi, "global multi-token"));
    case 3:
      return ApplyLocalDictionaries(corpus);
    case 4:
      return ApplyDictionary(corpus, need(resources.kg_filtered, "kg-filtered"));
    case 5:
      return ApplyDictionary(
          corpus, need(resources.kg_filtered_multi, "kg-filtered multi-token"));
    case 6: {
      const Dictionary& kg = need(resources.kg_filtered, "kg-filtered");
      return ApplyDictionary(ApplyLocalDictionaries(corpus), kg);
    }
    case 7: {
      const Dictionary& kg =
          need(resources.kg_filtered_multi, "kg-filtered multi-token");
      return ApplyDictionary(ApplyLocalDictionaries(corpus), kg);
    }
    default:
      throw ConfigError("unknown experiment " + std::to_string(id) +
                        " (expected 1-7)");
  }
}

}  // namespace uner
