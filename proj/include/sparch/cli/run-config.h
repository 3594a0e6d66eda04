// sparch/cli/run-config.h

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

#ifndef SPARCH_CLI_RUN_CONFIG_H_
#define SPARCH_CLI_RUN_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sparch/corpus/corpus.h"
#include "sparch/encoders/retriever-model.h"
#include "sparch/trainer/trainer.h"

namespace sparch {

/// Profile files are `key = value` lines; `#` starts a comment. The key
/// `inherit` names another profile (relative to the including file) whose
/// values are read first and then overridden.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap ReadProfile(const std::filesystem::path &path);
/// Parses "key=value" into `map`. Throws kConfig without '='.
void ApplyOverride(ConfigMap *map, std::string_view assignment);

struct RunPaths {
  std::filesystem::path corpus;
  std::filesystem::path checkpoints;
  std::filesystem::path index;
  std::filesystem::path reports;
};

struct RunConfig {
  std::string profile = "builtin";
  uint64_t seed = 0;
  int threads = 1;
  int k = 20;
  RunPaths paths;
  CorpusConfig corpus;
  RetrieverConfig model;  // shared topology; input kind and sizes are set per role
  TrainConfig teacher;
  TrainConfig student;
  InputKind student_input = InputKind::kFrames;

  /// Every setting as a flat key -> JSON-encoded value map.
  nlohmann::ordered_json Settings() const;
  /// Hash of Settings() without the paths.* keys.
  std::string Hash() const;
};

/// Starts from the built-in defaults (paths under `runs/`) and applies the
/// map in key order. Unknown keys and ill-typed values throw kConfig.
RunConfig BuildRunConfig(const ConfigMap &map);

}  // namespace sparch

#endif  // SPARCH_CLI_RUN_CONFIG_H_
