// Copyright 2026 The framex Authors.
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

// framex command-line front end.
//
//   framex <command> --in <path> --out <path> [--seed N] [--param k=v]...
//          [--no-timestamp] [--csv <path>]

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "framex/version.h"
#include "job.h"

int main(int argc, char** argv) {
  CLI::App app{"framex: finite frame toolkit"};
  app.set_version_flag("--version", framex::kVersion);
  framex::tools::Job job;
  std::vector<std::string> params;
  bool no_timestamp = false;
  app.add_option("command", job.command, "Command to run")
      ->required()
      ->check(CLI::IsMember(framex::tools::Commands()));
  app.add_option("--in", job.input_path, "Input JSON file")->required();
  app.add_option("--out", job.output_path, "Output report path")->required();
  app.add_option("--seed", job.seed, "Random seed");
  app.add_option("--param", params, "Parameter override key=value")->allow_extra_args(false);
  app.add_flag("--no-timestamp", no_timestamp, "Omit wall time from the report");
  app.add_option("--csv", job.csv_path, "Also export flat tables as CSV");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : framex::tools::kExitParse;
  }
  for (const std::string& kv : params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "framex: --param expects key=value, got " << kv << '\n';
      return framex::tools::kExitParse;
    }
    job.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  job.timestamp = !no_timestamp;
  return framex::tools::Run(job);
}
