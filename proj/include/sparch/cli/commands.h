// sparch/cli/commands.h

// Copyright 2026  The sparch authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPARCH_CLI_COMMANDS_H_
#define SPARCH_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

#include "sparch/base/error.h"
#include "sparch/cli/run-config.h"

namespace sparch {

/// Per-invocation flags. Empty strings select the documented defaults.
struct CommandOptions {
  std::string model;  // checkpoint / index name (index, search, eval)
  std::string name;   // output checkpoint name (train-teacher, train-student)
  bool no_kd = false;
  std::string split = "test";
  std::string question;
  int k = 0;  // 0 uses RunConfig::k
  std::string a = "teacher";
  std::string b = "student";
  std::vector<std::string> retrievers;  // wer-report; default teacher, student
};

const std::vector<std::string> &SubcommandNames();

/// Runs one subcommand. Artifacts go under config.paths, a summary to
/// `out`. Failures throw sparch::Error.
void RunSubcommand(const std::string &name, const RunConfig &config, const CommandOptions &options,
                   std::ostream &out);

/// 1 usage, 2 config, 3 io, 4 data (including fingerprint mismatches),
/// 5 divergence, 6 anything else.
int ExitCodeFor(ErrorKind kind);

}  // namespace sparch

#endif  // SPARCH_CLI_COMMANDS_H_
