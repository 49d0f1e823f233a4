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

#ifndef UNER_PIPELINE_H_
#define UNER_PIPELINE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uner/ingest.h"
#include "uner/linker.h"

namespace uner {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  DumpFormat format = DumpFormat::kJsonLines;
  std::filesystem::path out_dir = "out";
  std::filesystem::path equivalence_path;
  std::filesystem::path priority_path;
  std::optional<std::filesystem::path> cache_path;
  std::optional<std::string> endpoint;
  bool offline = false;
  std::string resource_base{kDefaultResourceBase};
  std::size_t batch_size = 50;
  std::size_t concurrency = 4;
  int retries = 3;
  int timeout_ms = 10000;
  double requests_per_second = 5.0;
  std::vector<int> experiments;
  std::optional<std::size_t> collapse_depth;
  std::optional<std::filesystem::path> golden_path;
  std::optional<std::filesystem::path> system_path;
  std::optional<std::filesystem::path> kg_map_path;
  bool report_outside = false;
};

// Defaults, with the mapping tables taken from the installed data directory.
RunConfig DefaultConfig();

// Sets one key. Throws ConfigError for unknown keys or bad values.
// Relative paths are resolved against `base_dir`.
void ApplyConfigValue(RunConfig& config, std::string_view key,
                      std::string_view value,
                      const std::filesystem::path& base_dir = {});

// "key = value" lines; '#' starts a comment. Relative paths are resolved
// against the file's directory.
void ApplyConfigFile(RunConfig& config, const std::filesystem::path& path);

// "1,4,6" -> {1, 4, 6}; every id must be in 1..7.
std::vector<int> ParseExperimentList(std::string_view text);

// Per-stage counters and timings, written as manifest.json.
class RunManifest {
 public:
  struct Stage {
    std::string name;
    std::map<std::string, std::uint64_t> counters;
    double wall_ms = 0.0;
  };

  Stage& BeginStage(std::string name);
  void EndStage(Stage& stage, std::chrono::steady_clock::time_point start);
  void Fail(std::string message) { error_ = std::move(message); }

  const std::vector<Stage>& stages() const { return stages_; }
  const Stage* Find(std::string_view name) const;
  std::string ToJson(const RunConfig& config, std::string_view command) const;

 private:
  std::vector<Stage> stages_;
  std::optional<std::string> error_;
};

enum class Command { kExtract, kLink, kAnnotate, kStats, kEnrich, kEval, kPipeline };

std::optional<Command> ParseCommand(std::string_view name);
std::string_view CommandName(Command command);

// Hooks for tests; null members mean the real implementations.
struct RunEnvironment {
  SparqlTransport* transport = nullptr;
  Clock* clock = nullptr;
};

// Runs `command`, writing outputs under config.out_dir atomically and
// manifest.json even when a stage fails (the error is then rethrown).
RunManifest RunCommand(Command command, const RunConfig& config,
                       const RunEnvironment& env = {});

// Output file names inside the output directory.
namespace files {
inline constexpr char kDocuments[] = "documents.jsonl";
inline constexpr char kTargets[] = "targets.txt";
inline constexpr char kCatalog[] = "catalog.tsv";
inline constexpr char kUnresolved[] = "unresolved.txt";
inline constexpr char kCorpus[] = "corpus.conll";
inline constexpr char kEntityTargets[] = "entity_targets.tsv";
inline constexpr char kStatsText[] = "stats.txt";
inline constexpr char kStatsJson[] = "stats.json";
inline constexpr char kEntities[] = "entities.tsv";
inline constexpr char kManifest[] = "manifest.json";
std::string ExperimentCorpus(int id);
std::string EvalJson(std::optional<int> experiment);
std::string EvalText(std::optional<int> experiment);
}  // namespace files

}  // namespace uner

#endif  // UNER_PIPELINE_H_
