// Copyright 2026 The reqplan Authors
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

#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "reqplan/analysis.hpp"
#include "reqplan/api_http.hpp"
#include "reqplan/project_io.hpp"

namespace reqplan {

// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNoSolution = 1;
inline constexpr int kExitInputError = 2;

// Runs the `reqplan` command line. Output goes to `out`, diagnostics to `err`.
inline int RunCli(int argc, const char* const* argv, std::ostream& out,
                  std::ostream& err) {
  CLI::App app{"Requirements prioritization and release planning engine", "reqplan"};
  app.require_subcommand(1);

  std::string project_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  app.add_option("--project", project_path, "Project document (JSON)");
  app.add_option("--out", out_path, "Write the output to this file");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "table"}));
  app.add_option("--seed", seed, "Random seed for matrix completion");

  AnalysisOptions options;
  std::optional<Command> chosen;
  for (const auto& [command, name] : kCommandNames) {
    auto* sub = app.add_subcommand(name);
    const Command c = command;
    sub->callback([&chosen, c] { chosen = c; });
    switch (command) {
      case Command::kComplete:
        sub->add_option("--dimension", options.dimension, "Dimension to complete");
        break;
      case Command::kMvp:
        sub->add_option("--maxtime", options.maxtime, "Time budget")
            ->check(CLI::NonNegativeNumber);
        break;
      case Command::kConflicts:
        sub->add_flag("--ignore-hard", options.ignore_hard,
                      "Use an empty background instead of the hard constraints");
        sub->add_option("--limit", options.limit, "Stop after this many conflicts");
        break;
      case Command::kDiagnose:
        sub->add_flag("--ignore-hard", options.ignore_hard,
                      "Use an empty background instead of the hard constraints");
        break;
      case Command::kAssign:
        sub->add_option("--requirement", options.requirement, "Only this requirement");
        sub->add_option("--k", options.k, "Validators per requirement")
            ->check(CLI::NonNegativeNumber);
        break;
      default:
        break;
    }
  }

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host);
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));

  auto* import = app.add_subcommand("import-csv", "Replace one dimension from a CSV grid");
  std::string csv_dimension;
  std::string csv_path;
  import->add_option("--dimension", csv_dimension)->required();
  import->add_option("--csv", csv_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (const char* env = std::getenv("REQPLAN_SEED"); env != nullptr && *env) {
    try {
      std::size_t used = 0;
      seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      err << "error: REQPLAN_SEED must be an unsigned integer\n";
      return kExitInputError;
    }
  }
  options.seed = seed;

  auto emit = [&](const std::string& text) -> int {
    if (out_path.empty()) {
      out << text;
      return kExitOk;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << out_path << "\n";
      return kExitInputError;
    }
    file << text;
    return kExitOk;
  };

  try {
    if (serve->parsed()) {
      ApiService service;
      if (!project_path.empty()) service.Load(LoadProject(project_path));
      httplib::Server server;
      AttachRoutes(server, service);
      err << "listening on " << host << ":" << port << "\n";
      return server.listen(host, port) ? kExitOk : kExitInputError;
    }
    if (project_path.empty()) {
      err << "error: --project is required\n";
      return kExitInputError;
    }
    ProjectDocument doc = LoadProject(project_path);
    if (import->parsed()) {
      ImportCsv(doc, csv_dimension, ReadFile(csv_path));
      const std::string text = ProjectToJson(doc).dump(2) + "\n";
      if (out_path.empty()) {
        SaveProject(doc, project_path);
        return kExitOk;
      }
      return emit(text);
    }
    const AnalysisOutcome outcome = RunAnalysis(*chosen, doc, options);
    const int written =
        emit(format == "table" ? outcome.table : outcome.result.dump(2) + "\n");
    return written != kExitOk ? written : outcome.exit_code;
  } catch (const ValidationFailure& e) {
    err << "error: invalid project\n";
    for (const auto& issue : e.issues()) err << "  " << issue.ToString() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace reqplan
