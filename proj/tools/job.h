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

#ifndef FRAMEX_TOOLS_JOB_H_
#define FRAMEX_TOOLS_JOB_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace framex::tools {

inline const std::vector<std::string>& Commands() {
  static const std::vector<std::string> kCommands = {
      "analyze", "dual", "classify", "extract", "sample",
      "selector", "density", "gabor", "construct45"};
  return kCommands;
}

struct Job {
  std::string command;
  std::string input_path;
  std::string output_path;
  std::map<std::string, std::string> params;
  uint64_t seed = 0;
  bool timestamp = true;
  std::string csv_path;  // empty: no CSV export
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitBudget = 4;

// Runs the job and writes its report (or an error report) to output_path.
int Run(const Job& job);

}  // namespace framex::tools

#endif  // FRAMEX_TOOLS_JOB_H_
