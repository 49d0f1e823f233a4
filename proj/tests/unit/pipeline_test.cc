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

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "test_support.h"
#include "uner/atomic_file.h"
#include "uner/evaluation.h"
#include "uner/parallel.h"
#include "uner/pipeline.h"

namespace uner {
namespace {

namespace fs = std::filesystem;
using testing::FixtureDir;
using testing::ReadFile;

nlohmann::json Manifest(const fs::path& out) {
  return nlohmann::json::parse(ReadFile(out / files::kManifest));
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    unsetenv(std::string(kEndpointEnvVar).c_str());
    out_ = testing::MakeTempDir("pipeline");
    config_ = DefaultConfig();
    config_.inputs = {FixtureDir() / "dump10.jsonl"};
    config_.out_dir = out_ / "out";
    config_.requests_per_second = 0;
  }
  void TearDown() override {
    unsetenv(std::string(kEndpointEnvVar).c_str());
    fs::remove_all(out_);
  }

  // Cache file holding a copy of the fixture class cache.
  fs::path CopyCache(const std::string& name) {
    const fs::path path = out_ / name;
    fs::copy_file(FixtureDir() / "class_cache.tsv", path);
    return path;
  }

  // Mock endpoint answering with the fixture cache contents.
  static std::map<std::string, std::vector<std::string>> FixtureClasses() {
    const ClassCatalog cache = ClassCatalog::Load(FixtureDir() / "class_cache.tsv");
    return cache.entries();
  }

  fs::path out_;
  RunConfig config_;
};

TEST_F(PipelineTest, OfflineFixtureMatchesExpectedAtAnyConcurrency) {
  config_.cache_path = FixtureDir() / "class_cache.tsv";
  config_.offline = true;
  const std::string expected = ReadFile(FixtureDir() / "expected_pipeline.conll");
  for (std::size_t concurrency : {1u, 8u}) {
    config_.concurrency = concurrency;
    config_.out_dir = out_ / ("c" + std::to_string(concurrency));
    const RunManifest manifest = RunCommand(Command::kPipeline, config_);
    EXPECT_EQ(ReadFile(config_.out_dir / files::kCorpus), expected);
    const auto* annotate = manifest.Find("annotate");
    ASSERT_NE(annotate, nullptr);
    EXPECT_EQ(annotate->counters.at("sentences_kept") + annotate->counters.at("sentences_dropped"),
              annotate->counters.at("sentences_total"));
    EXPECT_EQ(manifest.Find("extract")->counters.at("documents"), 10u);
    EXPECT_EQ(manifest.Find("extract")->counters.at("malformed_lines"), 1u);
  }
  EXPECT_EQ(ReadFile(out_ / "c1" / files::kCatalog), ReadFile(out_ / "c8" / files::kCatalog));
  EXPECT_EQ(ReadFile(out_ / "c1" / files::kStatsJson), ReadFile(out_ / "c8" / files::kStatsJson));
}

TEST_F(PipelineTest, ManifestRecordsStagesAndConfig) {
  config_.cache_path = FixtureDir() / "class_cache.tsv";
  config_.offline = true;
  RunCommand(Command::kPipeline, config_);
  const auto j = Manifest(config_.out_dir);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["tool_version"], std::string(kToolVersion));
  EXPECT_EQ(j["command"], "pipeline");
  std::vector<std::string> stages;
  for (const auto& s : j["stages"]) stages.push_back(s["name"]);
  EXPECT_EQ(stages, (std::vector<std::string>{"extract", "link", "annotate", "stats"}));
  EXPECT_EQ(j["config"]["offline"], true);
  EXPECT_EQ(j["stages"][1]["counters"]["requests"], 0);
  EXPECT_EQ(j["stages"][1]["counters"]["offline"], 1);
  for (const auto& entry : fs::directory_iterator(config_.out_dir)) {
    EXPECT_EQ(entry.path().filename().string().find(".tmp."), std::string::npos);
  }
}

TEST_F(PipelineTest, MissingInputFailsWithManifest) {
  config_.inputs = {out_ / "nope.jsonl"};
  EXPECT_THROW(RunCommand(Command::kPipeline, config_), ConfigError);
  const auto j = Manifest(config_.out_dir);
  EXPECT_EQ(j["status"], "failed");
  EXPECT_NE(j["error"].get<std::string>().find("nope.jsonl"), std::string::npos);
  EXPECT_TRUE(j["stages"].empty());
}

TEST_F(PipelineTest, PipelineValidatesPathsBeforeWork) {
  config_.offline = true;
  config_.golden_path = out_ / "missing_gold.conll";
  EXPECT_THROW(RunCommand(Command::kPipeline, config_), ConfigError);
  EXPECT_FALSE(fs::exists(config_.out_dir / files::kDocuments));
  config_.golden_path.reset();
  config_.experiments = {4};
  EXPECT_THROW(RunCommand(Command::kPipeline, config_), ConfigError);
}

TEST_F(PipelineTest, StagesRunSeparately) {
  config_.cache_path = FixtureDir() / "class_cache.tsv";
  config_.offline = true;
  EXPECT_THROW(RunCommand(Command::kAnnotate, config_), ConfigError);
  RunCommand(Command::kExtract, config_);
  RunCommand(Command::kLink, config_);
  RunCommand(Command::kAnnotate, config_);
  RunCommand(Command::kStats, config_);
  EXPECT_EQ(ReadFile(config_.out_dir / files::kCorpus),
            ReadFile(FixtureDir() / "expected_pipeline.conll"));
  const auto stats = nlohmann::json::parse(ReadFile(config_.out_dir / files::kStatsJson));
  EXPECT_EQ(stats["total_tokens"].get<std::size_t>(),
            stats["entity_tokens"].get<std::size_t>() + stats["non_entity_tokens"].get<std::size_t>());
  EXPECT_EQ(stats["entity_count"].get<std::size_t>(),
            testing::CountBeginLines(ReadFile(config_.out_dir / files::kCorpus)));
  const std::string unresolved = ReadFile(config_.out_dir / files::kUnresolved);
  EXPECT_NE(unresolved.find("Unknown Place"), std::string::npos);
  EXPECT_EQ(Manifest(config_.out_dir)["command"], "stats");
}

TEST_F(PipelineTest, ColdCacheResolvesThroughEndpointAndSavesCache) {
  testing::MockSparqlTransport mock(FixtureClasses());
  config_.cache_path = out_ / "cache.tsv";
  config_.endpoint = "http://mock/sparql";
  config_.batch_size = 4;
  RunEnvironment env{&mock, nullptr};
  RunCommand(Command::kPipeline, config_, env);
  EXPECT_GT(mock.calls(), 0u);
  EXPECT_EQ(ReadFile(config_.out_dir / files::kCorpus),
            ReadFile(FixtureDir() / "expected_pipeline.conll"));
  EXPECT_TRUE(fs::exists(*config_.cache_path));

  // A second run is served from the now warm cache.
  testing::MockSparqlTransport second(FixtureClasses());
  const std::string catalog = ReadFile(config_.out_dir / files::kCatalog);
  RunEnvironment env2{&second, nullptr};
  RunCommand(Command::kLink, config_, env2);
  EXPECT_EQ(ReadFile(config_.out_dir / files::kCatalog), catalog);
  EXPECT_EQ(second.calls(), 0u);
}

TEST_F(PipelineTest, EnvironmentEndpointOverridesAndOfflineWins) {
  testing::MockSparqlTransport mock(FixtureClasses());
  RunEnvironment env{&mock, nullptr};
  RunCommand(Command::kExtract, config_);
  setenv(std::string(kEndpointEnvVar).c_str(), "http://env/sparql", 1);
  config_.offline = true;
  RunCommand(Command::kLink, config_, env);
  EXPECT_EQ(mock.calls(), 0u);
  config_.offline = false;
  const RunManifest m = RunCommand(Command::kLink, config_, env);
  EXPECT_GT(mock.calls(), 0u);
  EXPECT_EQ(Manifest(config_.out_dir)["stages"][0]["counters"]["offline"], 0);
  EXPECT_EQ(m.Find("link")->counters.at("unresolved"), 0u);
}

TEST_F(PipelineTest, NoEndpointMeansOffline) {
  testing::MockSparqlTransport mock(FixtureClasses());
  RunEnvironment env{&mock, nullptr};
  RunCommand(Command::kExtract, config_);
  const RunManifest m = RunCommand(Command::kLink, config_, env);
  EXPECT_EQ(mock.calls(), 0u);
  EXPECT_EQ(m.Find("link")->counters.at("offline"), 1u);
}

TEST_F(PipelineTest, TotalNetworkFailureIsExhaustion) {
  testing::MockSparqlTransport mock(FixtureClasses());
  mock.fail_all = true;
  config_.endpoint = "http://mock/sparql";
  config_.retries = 0;
  RunEnvironment env{&mock, nullptr};
  RunCommand(Command::kExtract, config_);
  try {
    RunCommand(Command::kLink, config_, env);
    FAIL();
  } catch (const NetworkExhaustedError& e) {
    EXPECT_EQ(e.exit_code(), ExitCode::kNetworkExhausted);
  }
  EXPECT_EQ(Manifest(config_.out_dir)["status"], "failed");
}

TEST_F(PipelineTest, PartialNetworkFailureIsNotFatal) {
  testing::MockSparqlTransport mock(FixtureClasses());
  mock.fail_first = 1;
  config_.endpoint = "http://mock/sparql";
  config_.retries = 0;
  config_.concurrency = 1;
  RunEnvironment env{&mock, nullptr};
  RunCommand(Command::kExtract, config_);
  const RunManifest m = RunCommand(Command::kLink, config_, env);
  EXPECT_EQ(m.Find("link")->counters.at("failed_requests"), 1u);
  EXPECT_EQ(m.Find("link")->counters.at("unresolved"), 0u);
}

TEST_F(PipelineTest, EnrichAndEvalExperiments) {
  config_.cache_path = FixtureDir() / "class_cache.tsv";
  config_.offline = true;
  const fs::path kg = out_ / "kg.tsv";
  std::ofstream(kg) << "Barack Obama\tdbo:Politician\nBaku\tdbo:City\nHaiti\towl:Thing\n";
  config_.kg_map_path = kg;
  config_.experiments = {1, 3, 4, 7};
  config_.golden_path = FixtureDir() / "golden.conll";
  const RunManifest m = RunCommand(Command::kPipeline, config_);
  for (int id : {1, 3, 4, 7}) {
    EXPECT_TRUE(fs::exists(config_.out_dir / files::ExperimentCorpus(id))) << id;
    EXPECT_TRUE(fs::exists(config_.out_dir / files::EvalJson(id))) << id;
    EXPECT_GE(m.Find("enrich")->counters.at("entities_exp" + std::to_string(id)),
              m.Find("enrich")->counters.at("entities_base"));
  }
  for (const char* kind : {"global", "global_multi", "kg_filtered", "kg_filtered_multi"}) {
    EXPECT_TRUE(fs::exists(config_.out_dir / ("dict_" + std::string(kind) + ".tsv"))) << kind;
  }
  // "Haiti" links to a target whose graph class maps to NULL.
  EXPECT_EQ(m.Find("enrich")->counters.at("kg_null_mapped"), 1u);
}

TEST_F(PipelineTest, EvalAgainstHandWrittenGold) {
  config_.cache_path = FixtureDir() / "class_cache.tsv";
  config_.offline = true;
  RunCommand(Command::kPipeline, config_);
  config_.golden_path = FixtureDir() / "golden.conll";
  RunCommand(Command::kEval, config_);
  auto j = nlohmann::json::parse(ReadFile(config_.out_dir / files::EvalJson(std::nullopt)));
  const auto& country = j["per_tag"]["B-Name-Location-GPE-Country"];
  EXPECT_EQ(country["precision"], 100.0);
  EXPECT_EQ(country["recall"], 75.0);
  EXPECT_EQ(country["f1"], 85.7);
  EXPECT_EQ(j["per_tag"]["B-Name-Organization-Religious"]["f1"], 0.0);
  EXPECT_FALSE(j["per_tag"].contains("O"));
  const auto counted = j["counted_tags"].get<std::vector<std::string>>();
  EXPECT_EQ(std::count(counted.begin(), counted.end(), "B-Name-Organization-Religious"), 0);

  config_.collapse_depth = 2;
  config_.report_outside = true;
  RunCommand(Command::kEval, config_);
  j = nlohmann::json::parse(ReadFile(config_.out_dir / files::EvalJson(std::nullopt)));
  EXPECT_EQ(j["per_tag"]["B-Name-Organization"]["f1"], 100.0);
  EXPECT_EQ(j["per_tag"]["B-Name-Location"]["precision"], 100.0);
  EXPECT_LT(j["per_tag"]["B-Name-Location"]["recall"].get<double>(), 100.0);
  EXPECT_TRUE(j["per_tag"].contains("O"));

  config_.system_path = FixtureDir() / "golden.conll";
  config_.collapse_depth.reset();
  RunCommand(Command::kEval, config_);
  j = nlohmann::json::parse(ReadFile(config_.out_dir / files::EvalJson(std::nullopt)));
  EXPECT_EQ(j["macro"]["f1"], 100.0);
}

TEST_F(PipelineTest, EvalMisalignmentIsDataError) {
  config_.golden_path = FixtureDir() / "golden.conll";
  const fs::path system = out_ / "short.conll";
  std::ofstream(system) << "# doc_id = 1\nThe\tO\n\n";
  config_.system_path = system;
  EXPECT_THROW(RunCommand(Command::kEval, config_), AlignmentError);
}

TEST(ConfigTest, FileValuesAndRelativePaths) {
  const fs::path dir = testing::MakeTempDir("config");
  std::ofstream(dir / "run.conf") << "# comment\n"
                                     "input = a.jsonl, b.jsonl\n"
                                     "out = results\n"
                                     "cache = /abs/cache.tsv\n"
                                     "experiments = 1, 4,6\n"
                                     "collapse_depth = 2\n"
                                     "offline = yes\n"
                                     "batch_size = 10\n"
                                     "requests_per_second = 2.5\n"
                                     "format = plain_anchored\n";
  RunConfig c = DefaultConfig();
  ApplyConfigFile(c, dir / "run.conf");
  ASSERT_EQ(c.inputs.size(), 2u);
  EXPECT_EQ(c.inputs[0], dir / "a.jsonl");
  EXPECT_EQ(c.inputs[1], dir / "b.jsonl");
  EXPECT_EQ(c.out_dir, dir / "results");
  EXPECT_EQ(c.cache_path, fs::path("/abs/cache.tsv"));
  EXPECT_EQ(c.experiments, (std::vector<int>{1, 4, 6}));
  EXPECT_EQ(c.collapse_depth, 2u);
  EXPECT_TRUE(c.offline);
  EXPECT_EQ(c.batch_size, 10u);
  EXPECT_EQ(c.requests_per_second, 2.5);
  EXPECT_EQ(c.format, DumpFormat::kPlainAnchored);
  fs::remove_all(dir);
}

TEST(ConfigTest, BadValuesAreConfigErrors) {
  RunConfig c = DefaultConfig();
  EXPECT_THROW(ApplyConfigValue(c, "bogus", "1"), ConfigError);
  EXPECT_THROW(ApplyConfigValue(c, "batch_size", "0"), ConfigError);
  EXPECT_THROW(ApplyConfigValue(c, "concurrency", "x"), ConfigError);
  EXPECT_THROW(ApplyConfigValue(c, "collapse_depth", "5"), ConfigError);
  EXPECT_THROW(ApplyConfigValue(c, "experiments", "8"), ConfigError);
  EXPECT_THROW(ApplyConfigValue(c, "offline", "maybe"), ConfigError);
  EXPECT_THROW(ApplyConfigValue(c, "format", "xml"), ConfigError);
  EXPECT_THROW(ApplyConfigFile(c, "/nonexistent/run.conf"), ConfigError);
  EXPECT_EQ(ParseExperimentList("3,3,1"), (std::vector<int>{3, 1}));
}

TEST(ConfigTest, ErrorsNameTheLine) {
  const fs::path dir = testing::MakeTempDir("config_err");
  std::ofstream(dir / "bad.conf") << "out = x\nno equals sign\n";
  RunConfig c = DefaultConfig();
  try {
    ApplyConfigFile(c, dir / "bad.conf");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.conf:2"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(CommandTest, NamesRoundTrip) {
  for (const char* name : {"extract", "link", "annotate", "stats", "enrich", "eval", "pipeline"}) {
    EXPECT_EQ(CommandName(*ParseCommand(name)), name);
  }
  EXPECT_FALSE(ParseCommand("bogus"));
}

TEST(AtomicFileTest, CommitAndAbandon) {
  const fs::path dir = testing::MakeTempDir("atomic");
  const fs::path target = dir / "f.txt";
  WriteFileAtomically(target, "old");
  {
    AtomicFileWriter w(target);
    w.stream() << "partial";
  }
  EXPECT_EQ(ReadFile(target), "old");
  {
    AtomicFileWriter w(target);
    w.stream() << "new";
    EXPECT_EQ(ReadFile(target), "old");
    w.Commit();
  }
  EXPECT_EQ(ReadFile(target), "new");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 1u);
  EXPECT_THROW(WriteFileAtomically(dir / "missing" / "f.txt", "x"), IoError);
  fs::remove_all(dir);
}

TEST(ParallelTest, OrderedAndRethrows) {
  std::vector<int> items(1000);
  std::iota(items.begin(), items.end(), 0);
  const auto out = OrderedParallelMap(items, 8, [](const int& x) { return x * 2; });
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(out[i], 2 * i);
  EXPECT_THROW(OrderedParallelMap(items, 4,
                                  [](const int& x) -> int {
                                    if (x == 500) throw DataError("boom");
                                    return x;
                                  }),
               DataError);
  EXPECT_TRUE(OrderedParallelMap(std::vector<int>{}, 4, [](const int& x) { return x; }).empty());
}

}  // namespace
}  // namespace uner
