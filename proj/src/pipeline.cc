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

#include "uner/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "uner/annotator.h"
#include "uner/atomic_file.h"
#include "uner/conll.h"
#include "uner/enrich.h"
#include "uner/evaluation.h"
#include "uner/mapping.h"
#include "uner/parallel.h"
#include "uner/stats.h"
#include "uner/text_util.h"

#ifndef UNER_DEFAULT_DATA_DIR
#define UNER_DEFAULT_DATA_DIR "data"
#endif

namespace uner {

namespace fs = std::filesystem;

namespace files {
std::string ExperimentCorpus(int id) {
  return "corpus.exp" + std::to_string(id) + ".conll";
}
std::string EvalJson(std::optional<int> experiment) {
  return experiment ? "eval.exp" + std::to_string(*experiment) + ".json"
                    : "eval.json";
}
std::string EvalText(std::optional<int> experiment) {
  return experiment ? "eval.exp" + std::to_string(*experiment) + ".txt"
                    : "eval.txt";
}
}  // namespace files

namespace {

constexpr std::size_t kAnnotateChunk = 2048;

template <typename Int>
Int ParseInteger(std::string_view key, std::string_view value, Int min) {
  Int out{};
  const auto [end, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size() || out < min) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " +
                      std::string(key));
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid boolean '" + std::string(value) + "' for " +
                    std::string(key));
}

fs::path Resolve(const fs::path& base, std::string_view value) {
  fs::path p{std::string(value)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string(), 0);
  return in;
}

void RequireFile(const fs::path& path, std::string_view what) {
  if (!fs::is_regular_file(path)) {
    throw ConfigError(std::string(what) + " not found: " + path.string());
  }
}

AnnotatedCorpus LoadCorpus(const fs::path& path) {
  std::ifstream in = OpenInput(path);
  return ParseConll(in, path.string());
}

void SaveCorpus(const AnnotatedCorpus& corpus, const fs::path& path) {
  AtomicFileWriter writer(path);
  EmitConll(corpus, writer.stream());
  writer.Commit();
}

class Runner {
 public:
  Runner(const RunConfig& config, const RunEnvironment& env,
         RunManifest& manifest)
      : config_(config), env_(env), manifest_(manifest) {}

  // Checks every path the full pipeline will read before any stage runs.
  void ValidatePipeline() const;
  void Extract();
  void Link();
  void Annotate();
  void Stats();
  void Enrich();
  void Eval();

 private:
  fs::path Out(std::string_view name) const { return config_.out_dir / name; }

  template <typename Body>
  void Stage(std::string name, Body body) {
    const auto start = std::chrono::steady_clock::now();
    RunManifest::Stage& stage = manifest_.BeginStage(std::move(name));
    body(stage.counters);
    manifest_.EndStage(stage, start);
  }

  std::optional<std::string> Endpoint() const {
    if (config_.offline) return std::nullopt;
    if (const char* env = std::getenv(std::string(kEndpointEnvVar).c_str());
        env != nullptr && *env != '\0') {
      return std::string(env);
    }
    return config_.endpoint;
  }

  void EvaluateOne(const fs::path& system, std::optional<int> experiment,
                   std::map<std::string, std::uint64_t>& counters);

  const RunConfig& config_;
  const RunEnvironment& env_;
  RunManifest& manifest_;
};

void Runner::ValidatePipeline() const {
  if (config_.inputs.empty()) throw ConfigError("pipeline needs --input");
  for (const fs::path& input : config_.inputs) RequireFile(input, "input dump");
  RequireFile(config_.equivalence_path, "equivalence table");
  RequireFile(config_.priority_path, "priority table");
  if (config_.golden_path) RequireFile(*config_.golden_path, "golden corpus");
  if (config_.system_path) RequireFile(*config_.system_path, "system corpus");
  for (int id : config_.experiments) {
    if (id >= 4 && !config_.kg_map_path) {
      throw ConfigError("experiment " + std::to_string(id) +
                        " needs a knowledge-graph map (kg_map)");
    }
  }
  if (config_.kg_map_path && !config_.experiments.empty()) {
    RequireFile(*config_.kg_map_path, "knowledge-graph map");
  }
}

void Runner::Extract() {
  if (config_.inputs.empty()) throw ConfigError("extract needs --input");
  for (const fs::path& input : config_.inputs) RequireFile(input, "input dump");
  Stage("extract", [&](auto& counters) {
    AtomicFileWriter docs(Out(files::kDocuments));
    TargetCollector targets;
    std::unordered_set<std::string> seen;
    std::uint64_t documents = 0, links = 0, malformed_lines = 0,
                  malformed_markup = 0, fragments = 0, duplicates = 0;
    for (const fs::path& input : config_.inputs) {
      std::ifstream in = OpenInput(input);
      DumpReader reader(in, config_.format);
      while (std::optional<RawDocument> raw = reader.Next()) {
        if (!seen.insert(raw->doc_id).second) {
          ++duplicates;
          continue;
        }
        LinkExtraction extraction;
        const Document doc = MakeDocument(*raw, &extraction);
        ++documents;
        links += doc.links.size();
        malformed_markup += extraction.malformed_markup;
        fragments += extraction.fragments_stripped;
        targets.Add(doc);
        docs.stream() << DocumentToJson(doc) << '\n';
      }
      malformed_lines += reader.summary().malformed;
      duplicates += reader.summary().duplicate_ids;
    }
    docs.Commit();
    const std::vector<std::string> sorted = targets.Sorted();
    AtomicFileWriter target_file(Out(files::kTargets));
    WriteTargetList(sorted, target_file.stream());
    target_file.Commit();
    counters["documents"] = documents;
    counters["links"] = links;
    counters["unique_targets"] = sorted.size();
    counters["malformed_lines"] = malformed_lines;
    counters["duplicate_ids"] = duplicates;
    counters["malformed_markup"] = malformed_markup;
    counters["fragments_stripped"] = fragments;
  });
}

void Runner::Link() {
  RequireFile(Out(files::kTargets), "target list (run extract first)");
  Stage("link", [&](auto& counters) {
    std::vector<std::string> targets;
    {
      std::ifstream in = OpenInput(Out(files::kTargets));
      targets = ReadTargetList(in);
    }
    ClassCatalog cache;
    if (config_.cache_path && fs::exists(*config_.cache_path)) {
      cache = ClassCatalog::Load(*config_.cache_path);
    }

    const std::optional<std::string> endpoint = Endpoint();
    std::unique_ptr<SparqlTransport> owned_transport;
    std::optional<SparqlClient> client;
    if (endpoint) {
      SparqlTransport* transport = env_.transport;
      if (transport == nullptr) {
        owned_transport = MakeHttpTransport();
        transport = owned_transport.get();
      }
      SparqlOptions options;
      options.endpoint = *endpoint;
      options.resource_base = config_.resource_base;
      options.timeout = std::chrono::milliseconds(config_.timeout_ms);
      options.retries = config_.retries;
      options.requests_per_second = config_.requests_per_second;
      client.emplace(*transport, options,
                     env_.clock != nullptr ? *env_.clock : SystemClock());
    }

    ResolveOptions resolve_options;
    resolve_options.batch_size = config_.batch_size;
    resolve_options.concurrency = config_.concurrency;
    const ResolveResult result = ResolveAll(
        targets, cache, client ? &*client : nullptr, resolve_options);

    {
      AtomicFileWriter out(Out(files::kCatalog));
      result.catalog.Save(out.stream());
      out.Commit();
    }
    {
      AtomicFileWriter out(Out(files::kUnresolved));
      WriteTargetList(result.unresolved, out.stream());
      out.Commit();
    }
    if (client && config_.cache_path) {
      AtomicFileWriter out(*config_.cache_path);
      cache.Save(out.stream());
      out.Commit();
    }
    counters["targets"] = targets.size();
    counters["cache_hits"] = result.cache_hits;
    counters["entities_queried"] = result.entities_queried;
    counters["resolved_remotely"] = result.entities_resolved_remotely;
    counters["resolved"] = result.catalog.size();
    counters["unresolved"] = result.unresolved.size();
    counters["requests"] = result.requests;
    counters["failed_requests"] = result.failed_requests;
    counters["offline"] = client ? 0 : 1;
    if (result.requests > 0 && result.failed_requests == result.requests) {
      throw NetworkExhaustedError("every request to " + *endpoint +
                                  " failed; " +
                                  std::to_string(result.unresolved.size()) +
                                  " targets unresolved");
    }
  });
}

void Runner::Annotate() {
  RequireFile(Out(files::kDocuments), "document store (run extract first)");
  RequireFile(Out(files::kCatalog), "class catalog (run link first)");
  RequireFile(config_.equivalence_path, "equivalence table");
  RequireFile(config_.priority_path, "priority table");
  Stage("annotate", [&](auto& counters) {
    const UnerMapper mapper =
        UnerMapper::Load(config_.equivalence_path, config_.priority_path);
    const ClassCatalog catalog = ClassCatalog::Load(Out(files::kCatalog));
    MappingCounters mapping;
    LabelIndex labels;
    for (const auto& [target, classes] : catalog.entries()) {
      if (auto label = mapper.Resolve(classes, &mapping)) {
        labels.emplace(target, std::move(*label));
      }
    }

    struct Annotated {
      AnnotatedDocument doc;
      ProjectionCounters counters;
      std::vector<Mention> mentions;
    };
    auto annotate = [&](const std::string& line) {
      Annotated out;
      out.doc = AnnotateDocument(DocumentFromJson(line), labels, &out.counters,
                                 &out.mentions);
      return out;
    };

    AtomicFileWriter corpus_file(Out(files::kCorpus));
    ProjectionCounters projection;
    std::map<std::string, std::map<std::string, std::size_t>> target_votes;
    std::uint64_t documents = 0, bytes = 0;
    std::ifstream in = OpenInput(Out(files::kDocuments));
    std::vector<std::string> chunk;
    std::string line;
    bool more = true;
    while (more) {
      chunk.clear();
      while (chunk.size() < kAnnotateChunk && (more = static_cast<bool>(
                                                   std::getline(in, line)))) {
        if (!line.empty()) chunk.push_back(std::move(line));
      }
      if (in.bad()) throw IoError("read failure in document store", 0);
      if (chunk.empty()) continue;
      std::vector<Annotated> results =
          OrderedParallelMap(chunk, config_.concurrency, annotate);
      AnnotatedCorpus part;
      for (Annotated& r : results) {
        projection += r.counters;
        for (Mention& m : r.mentions) ++target_votes[m.surface][m.target];
        part.documents.push_back(std::move(r.doc));
      }
      documents += part.documents.size();
      bytes += EmitConll(part, corpus_file.stream());
    }
    corpus_file.Commit();

    SurfaceTargets surface_targets;
    for (const auto& [surface, votes] : target_votes) {
      auto best = votes.begin();
      for (auto it = votes.begin(); it != votes.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      surface_targets.emplace(surface, best->first);
    }
    AtomicFileWriter targets_file(Out(files::kEntityTargets));
    SaveSurfaceTargets(surface_targets, targets_file.stream());
    targets_file.Commit();

    counters["documents"] = documents;
    counters["labeled_targets"] = labels.size();
    counters["catalog_targets"] = catalog.size();
    counters["sentences_total"] =
        projection.sentences_kept + projection.sentences_dropped;
    counters["sentences_kept"] = projection.sentences_kept;
    counters["sentences_dropped"] = projection.sentences_dropped;
    counters["spans_labeled"] = projection.spans_labeled;
    counters["spans_unlabeled"] = projection.spans_unlabeled;
    counters["spans_truncated"] = projection.spans_truncated;
    counters["spans_dropped"] = projection.spans_dropped;
    counters["classes_without_priority"] = mapping.classes_without_priority;
    counters["unknown_classes"] = mapping.unknown_classes;
    counters["null_mapped"] = mapping.null_mapped;
    counters["conll_bytes"] = bytes;
  });
}

void Runner::Stats() {
  RequireFile(Out(files::kCorpus), "corpus (run annotate first)");
  Stage("stats", [&](auto& counters) {
    const AnnotatedCorpus corpus = LoadCorpus(Out(files::kCorpus));
    StatsAccumulator acc;
    for (const AnnotatedDocument& doc : corpus.documents) acc.Add(doc);
    const CorpusStats stats = acc.Finish();
    WriteFileAtomically(Out(files::kStatsText), FormatStatsText(stats));
    WriteFileAtomically(Out(files::kStatsJson), StatsToJson(stats));
    WriteFileAtomically(Out(files::kEntities), FormatEntityList(acc.Entities()));
    counters["total_tokens"] = stats.total_tokens;
    counters["entity_tokens"] = stats.entity_tokens;
    counters["non_entity_tokens"] = stats.non_entity_tokens;
    counters["entities"] = stats.entity_count;
    counters["distinct_entities"] = stats.distinct_entity_count;
  });
}

void Runner::Enrich() {
  if (config_.experiments.empty()) {
    throw ConfigError("enrich needs --experiments (ids 1-7)");
  }
  RequireFile(Out(files::kCorpus), "corpus (run annotate first)");
  const bool needs_kg = std::any_of(config_.experiments.begin(),
                                    config_.experiments.end(),
                                    [](int id) { return id >= 4; });
  if (needs_kg) {
    if (!config_.kg_map_path) {
      for (int id : config_.experiments) {
        if (id >= 4) {
          throw ConfigError("experiment " + std::to_string(id) +
                            " needs a knowledge-graph map (kg_map)");
        }
      }
    }
    RequireFile(*config_.kg_map_path, "knowledge-graph map");
    RequireFile(config_.equivalence_path, "equivalence table");
  }
  Stage("enrich", [&](auto& counters) {
    const AnnotatedCorpus corpus = LoadCorpus(Out(files::kCorpus));
    const Dictionary global = BuildGlobalDictionary(corpus, false);
    const Dictionary global_multi = BuildGlobalDictionary(corpus, true);
    auto save = [&](const Dictionary& dict) {
      AtomicFileWriter out(Out("dict_" + std::string(DictionaryKindName(dict.kind())) +
                               ".tsv"));
      dict.Save(out.stream());
      out.Commit();
    };
    save(global);
    save(global_multi);
    counters["dict_global"] = global.size();
    counters["dict_global_multi"] = global_multi.size();

    ExperimentResources resources{&global, &global_multi, nullptr, nullptr};
    std::optional<Dictionary> kg_dict, kg_multi;
    if (needs_kg) {
      const KgClassMap kg = KgClassMap::Load(*config_.kg_map_path);
      const EquivalenceMap eq = EquivalenceMap::Load(config_.equivalence_path);
      SurfaceTargets targets;
      if (fs::exists(Out(files::kEntityTargets))) {
        std::ifstream in = OpenInput(Out(files::kEntityTargets));
        targets = ParseSurfaceTargets(in, Out(files::kEntityTargets).string());
      }
      KgFilterCounters kgc;
      kg_dict = FilterByKg(global, kg, eq, &targets, &kgc);
      counters["kg_not_in_graph"] = kgc.not_in_kg;
      counters["kg_null_mapped"] = kgc.null_mapped;
      counters["kg_unknown_class"] = kgc.unknown_class;
      kg_multi = FilterByKg(global_multi, kg, eq, &targets);
      save(*kg_dict);
      save(*kg_multi);
      resources.kg_filtered = &*kg_dict;
      resources.kg_filtered_multi = &*kg_multi;
      counters["dict_kg_filtered"] = kg_dict->size();
      counters["dict_kg_filtered_multi"] = kg_multi->size();
    }

    const std::size_t base_entities = ComputeStats(corpus).entity_count;
    counters["entities_base"] = base_entities;
    for (int id : config_.experiments) {
      const AnnotatedCorpus result = RunExperiment(id, corpus, resources);
      SaveCorpus(result, Out(files::ExperimentCorpus(id)));
      counters["entities_exp" + std::to_string(id)] =
          ComputeStats(result).entity_count;
    }
  });
}

void Runner::EvaluateOne(const fs::path& system, std::optional<int> experiment,
                         std::map<std::string, std::uint64_t>& counters) {
  std::ifstream gold_in = OpenInput(*config_.golden_path);
  std::ifstream system_in = OpenInput(system);
  const std::vector<TagPair> pairs =
      AlignStreams(gold_in, config_.golden_path->string(), system_in,
                   system.string());
  const EvalReport report = PerTagMetrics(pairs, config_.collapse_depth);
  WriteFileAtomically(Out(files::EvalJson(experiment)),
                      ReportToJson(report, config_.report_outside));
  WriteFileAtomically(Out(files::EvalText(experiment)),
                      FormatReportText(report, config_.report_outside));
  const std::string suffix =
      experiment ? "_exp" + std::to_string(*experiment) : "";
  counters["tokens" + suffix] = report.tokens;
  counters["counted_tags" + suffix] = report.counted_tags.size();
}

void Runner::Eval() {
  if (!config_.golden_path) throw ConfigError("eval needs a golden file");
  RequireFile(*config_.golden_path, "golden corpus");
  const fs::path system =
      config_.system_path ? *config_.system_path : Out(files::kCorpus);
  RequireFile(system, "system corpus");
  std::vector<int> experiments;
  if (!config_.system_path) {
    for (int id : config_.experiments) {
      if (fs::exists(Out(files::ExperimentCorpus(id)))) experiments.push_back(id);
    }
  }
  Stage("eval", [&](auto& counters) {
    EvaluateOne(system, std::nullopt, counters);
    for (int id : experiments) {
      EvaluateOne(Out(files::ExperimentCorpus(id)), id, counters);
    }
  });
}

nlohmann::ordered_json ConfigToJson(const RunConfig& c) {
  nlohmann::ordered_json j;
  std::vector<std::string> inputs;
  for (const fs::path& p : c.inputs) inputs.push_back(p.string());
  auto opt_path = [](const std::optional<fs::path>& p) {
    return p ? nlohmann::ordered_json(p->string())
             : nlohmann::ordered_json(nullptr);
  };
  j["inputs"] = inputs;
  j["format"] = c.format == DumpFormat::kJsonLines ? "json_lines"
                                                   : "plain_anchored";
  j["out"] = c.out_dir.string();
  j["equivalence"] = c.equivalence_path.string();
  j["priority"] = c.priority_path.string();
  j["cache"] = opt_path(c.cache_path);
  j["endpoint"] = c.endpoint ? nlohmann::ordered_json(*c.endpoint)
                             : nlohmann::ordered_json(nullptr);
  j["offline"] = c.offline;
  j["resource_base"] = c.resource_base;
  j["batch_size"] = c.batch_size;
  j["concurrency"] = c.concurrency;
  j["retries"] = c.retries;
  j["timeout_ms"] = c.timeout_ms;
  j["requests_per_second"] = c.requests_per_second;
  j["experiments"] = c.experiments;
  j["collapse_depth"] = c.collapse_depth
                            ? nlohmann::ordered_json(*c.collapse_depth)
                            : nlohmann::ordered_json(nullptr);
  j["golden"] = opt_path(c.golden_path);
  j["system"] = opt_path(c.system_path);
  j["kg_map"] = opt_path(c.kg_map_path);
  j["report_outside"] = c.report_outside;
  return j;
}

}  // namespace

RunConfig DefaultConfig() {
  RunConfig config;
  const fs::path data = UNER_DEFAULT_DATA_DIR;
  config.equivalence_path = data / "uner_dbpedia_equivalence.tsv";
  config.priority_path = data / "dbpedia_priority.tsv";
  return config;
}

std::vector<int> ParseExperimentList(std::string_view text) {
  std::vector<int> ids;
  std::set<int> seen;
  for (const std::string& part : SplitString(text, ',')) {
    const std::string item = TrimWhitespace(part);
    if (item.empty()) continue;
    const int id = ParseInteger<int>("experiments", item, 0);
    if (id < kFirstExperiment || id > kLastExperiment) {
      throw ConfigError("unknown experiment " + item + " (expected 1-7)");
    }
    if (seen.insert(id).second) ids.push_back(id);
  }
  return ids;
}

void ApplyConfigValue(RunConfig& c, std::string_view key,
                      std::string_view value, const fs::path& base) {
  if (key == "input") {
    c.inputs.clear();
    for (const std::string& part : SplitString(value, ',')) {
      const std::string item = TrimWhitespace(part);
      if (!item.empty()) c.inputs.push_back(Resolve(base, item));
    }
  } else if (key == "format") {
    auto format = ParseDumpFormat(value);
    if (!format) throw ConfigError("unknown dump format " + std::string(value));
    c.format = *format;
  } else if (key == "out") {
    c.out_dir = Resolve(base, value);
  } else if (key == "equivalence") {
    c.equivalence_path = Resolve(base, value);
  } else if (key == "priority") {
    c.priority_path = Resolve(base, value);
  } else if (key == "cache") {
    c.cache_path = Resolve(base, value);
  } else if (key == "endpoint") {
    if (value.empty()) {
      c.endpoint.reset();
    } else {
      c.endpoint = std::string(value);
    }
  } else if (key == "offline") {
    c.offline = ParseBool(key, value);
  } else if (key == "resource_base") {
    c.resource_base = std::string(value);
  } else if (key == "batch_size") {
    c.batch_size = ParseInteger<std::size_t>(key, value, 1);
  } else if (key == "concurrency") {
    c.concurrency = ParseInteger<std::size_t>(key, value, 1);
  } else if (key == "retries") {
    c.retries = ParseInteger<int>(key, value, 0);
  } else if (key == "timeout_ms") {
    c.timeout_ms = ParseInteger<int>(key, value, 1);
  } else if (key == "requests_per_second") {
    double rps = 0;
    const auto [end, ec] =
        std::from_chars(value.data(), value.data() + value.size(), rps);
    if (ec != std::errc() || end != value.data() + value.size() || rps < 0) {
      throw ConfigError("invalid value for requests_per_second");
    }
    c.requests_per_second = rps;
  } else if (key == "experiments") {
    c.experiments = ParseExperimentList(value);
  } else if (key == "collapse_depth") {
    const auto depth = ParseInteger<std::size_t>(key, value, 1);
    if (depth > UnerLabel::kMaxDepth) {
      throw ConfigError("collapse_depth must be between 1 and 4");
    }
    c.collapse_depth = depth;
  } else if (key == "golden") {
    c.golden_path = Resolve(base, value);
  } else if (key == "system") {
    c.system_path = Resolve(base, value);
  } else if (key == "kg_map") {
    c.kg_map_path = Resolve(base, value);
  } else if (key == "report_outside") {
    c.report_outside = ParseBool(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

void ApplyConfigFile(RunConfig& config, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  const fs::path base = path.parent_path();
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string trimmed = TrimWhitespace(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(n) +
                        ": expected key = value");
    }
    const std::string key = TrimWhitespace(trimmed.substr(0, eq));
    const std::string value = TrimWhitespace(trimmed.substr(eq + 1));
    try {
      ApplyConfigValue(config, key, value, base);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": " +
                        e.what());
    }
  }
}

RunManifest::Stage& RunManifest::BeginStage(std::string name) {
  stages_.push_back(Stage{std::move(name), {}, 0.0});
  return stages_.back();
}

void RunManifest::EndStage(Stage& stage,
                           std::chrono::steady_clock::time_point start) {
  stage.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
}

const RunManifest::Stage* RunManifest::Find(std::string_view name) const {
  for (const Stage& stage : stages_) {
    if (stage.name == name) return &stage;
  }
  return nullptr;
}

std::string RunManifest::ToJson(const RunConfig& config,
                                std::string_view command) const {
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["status"] = error_ ? "failed" : "ok";
  if (error_) j["error"] = *error_;
  j["config"] = ConfigToJson(config);
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const Stage& stage : stages_) {
    nlohmann::ordered_json s;
    s["name"] = stage.name;
    s["wall_ms"] = stage.wall_ms;
    s["counters"] = stage.counters;
    stages.push_back(std::move(s));
  }
  j["stages"] = std::move(stages);
  return j.dump(2) + "\n";
}

std::optional<Command> ParseCommand(std::string_view name) {
  for (Command c : {Command::kExtract, Command::kLink, Command::kAnnotate,
                    Command::kStats, Command::kEnrich, Command::kEval,
                    Command::kPipeline}) {
    if (CommandName(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view CommandName(Command command) {
  switch (command) {
    case Command::kExtract:
      return "extract";
    case Command::kLink:
      return "link";
    case Command::kAnnotate:
      return "annotate";
    case Command::kStats:
      return "stats";
    case Command::kEnrich:
      return "enrich";
    case Command::kEval:
      return "eval";
    case Command::kPipeline:
      return "pipeline";
  }
  return "unknown";
}

RunManifest RunCommand(Command command, const RunConfig& config,
                       const RunEnvironment& env) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " +
                      config.out_dir.string() + ": " + ec.message());
  }
  RunManifest manifest;
  Runner runner(config, env, manifest);
  auto write_manifest = [&] {
    WriteFileAtomically(config.out_dir / files::kManifest,
                        manifest.ToJson(config, CommandName(command)));
  };
  try {
    switch (command) {
      case Command::kExtract:
        runner.Extract();
        break;
      case Command::kLink:
        runner.Link();
        break;
      case Command::kAnnotate:
        runner.Annotate();
        break;
      case Command::kStats:
        runner.Stats();
        break;
      case Command::kEnrich:
        runner.Enrich();
        break;
      case Command::kEval:
        runner.Eval();
        break;
      case Command::kPipeline:
        runner.ValidatePipeline();
        runner.Extract();
        runner.Link();
        runner.Annotate();
        runner.Stats();
        if (!config.experiments.empty()) runner.Enrich();
        if (config.golden_path) runner.Eval();
        break;
    }
  } catch (const std::exception& e) {
    manifest.Fail(e.what());
    write_manifest();
    throw;
  }
  write_manifest();
  return manifest;
}

}  // namespace uner
