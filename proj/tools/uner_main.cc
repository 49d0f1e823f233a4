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

// uner: build IOB-annotated NER corpora from linked encyclopedia text.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uner/error.h"
#include "uner/pipeline.h"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::vector<std::string> inputs;
  std::optional<std::string> out;
  std::optional<std::string> endpoint;
  bool offline = false;
  std::optional<std::string> experiments;
  std::optional<std::size_t> collapse_depth;
  std::optional<std::string> golden;
  std::optional<std::string> system;
  std::optional<std::string> cache;
  std::optional<std::string> kg_map;
  std::optional<std::size_t> concurrency;
  std::optional<std::string> format;
  bool report_outside = false;
};

uner::RunConfig BuildConfig(const Flags& f) {
  uner::RunConfig config = uner::DefaultConfig();
  if (f.config) uner::ApplyConfigFile(config, *f.config);
  auto set = [&](const char* key, const std::optional<std::string>& value) {
    if (value) uner::ApplyConfigValue(config, key, *value);
  };
  if (!f.inputs.empty()) {
    config.inputs.assign(f.inputs.begin(), f.inputs.end());
  }
  set("out", f.out);
  set("endpoint", f.endpoint);
  set("experiments", f.experiments);
  set("golden", f.golden);
  set("system", f.system);
  set("cache", f.cache);
  set("kg_map", f.kg_map);
  set("format", f.format);
  if (f.collapse_depth) {
    uner::ApplyConfigValue(config, "collapse_depth",
                           std::to_string(*f.collapse_depth));
  }
  if (f.concurrency) {
    uner::ApplyConfigValue(config, "concurrency",
                           std::to_string(*f.concurrency));
  }
  if (f.offline) config.offline = true;
  if (f.report_outside) config.report_outside = true;
  return config;
}

void AddCommonOptions(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value configuration file");
  cmd->add_option("--input", f.inputs, "input file(s)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--endpoint", f.endpoint, "SPARQL endpoint URL");
  cmd->add_flag("--offline", f.offline, "never contact the endpoint");
  cmd->add_option("--experiments", f.experiments, "experiment ids, e.g. 1,4,6");
  cmd->add_option("--collapse-depth", f.collapse_depth,
                  "score labels truncated to this many segments");
  cmd->add_option("--golden", f.golden, "golden CoNLL corpus");
  cmd->add_option("--system", f.system, "system CoNLL corpus");
  cmd->add_option("--cache", f.cache, "class cache TSV");
  cmd->add_option("--kg-map", f.kg_map, "knowledge-graph class map TSV");
  cmd->add_option("--concurrency", f.concurrency, "worker threads");
  cmd->add_option("--format", f.format, "json_lines or plain_anchored");
  cmd->add_flag("--report-outside", f.report_outside,
                "include the O tag in evaluation reports");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and evaluate UNER-annotated corpora"};
  app.set_version_flag("--version", std::string(uner::kToolVersion));
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"extract", "link", "annotate", "stats", "enrich",
                           "eval", "pipeline"}) {
    AddCommonOptions(app.add_subcommand(name), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(uner::ExitCode::kUsage);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const uner::Command command = *uner::ParseCommand(name);
  try {
    const uner::RunConfig config = BuildConfig(flags);
    uner::RunCommand(command, config);
    if (command == uner::Command::kEval) {
      std::ifstream report(config.out_dir / uner::files::EvalText(std::nullopt));
      std::cout << report.rdbuf();
    }
    return static_cast<int>(uner::ExitCode::kSuccess);
  } catch (const uner::Error& e) {
    std::cerr << "uner " << name << ": " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "uner " << name << ": " << e.what() << "\n";
    return static_cast<int>(uner::ExitCode::kDataError);
  }
}
