// tools/sparch.cc

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

// sparch: corpus generation, training, indexing, search and evaluation.
// Run `sparch --help` or `sparch <subcommand> --help` for flags.

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sparch/base/error.h"
#include "sparch/cli/commands.h"
#include "sparch/cli/run-config.h"

int main(int argc, char **argv) {
  using namespace sparch;
  CLI::App app{"Dense passage retrieval over synthetic spoken archives"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<uint64_t> seed;
  int verbose = 0;
  app.add_option("-c,--config", config_path, "Profile file (default: $SPARCH_CONFIG, else built-in defaults)");
  app.add_option("--set", overrides, "Override one setting, key=value (repeatable)");
  app.add_option("--seed", seed, "Seed for every random stream of the run");
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  CommandOptions opt;
  auto *gen = app.add_subcommand("gen-corpus", "Generate a synthetic spoken corpus");
  (void)gen;
  auto *tt = app.add_subcommand("train-teacher", "Train the text retriever on channel transcripts");
  tt->add_option("--name", opt.name, "Checkpoint name (default: teacher)");
  tt->add_option("--k", opt.k, "Top-K used for dev checkpoint selection");
  auto *ts = app.add_subcommand("train-student", "Train a student retriever, distilled from the teacher");
  ts->add_option("--teacher", opt.model, "Teacher checkpoint name (default: teacher)");
  ts->add_flag("--no-kd", opt.no_kd, "Drop the distillation terms (alpha = beta = 0)");
  ts->add_option("--name", opt.name, "Checkpoint name (default: student, student-nokd, cascading-student...)");
  ts->add_option("--k", opt.k, "Top-K used for dev checkpoint selection");
  auto *ix = app.add_subcommand("index", "Encode every passage with a checkpoint's passage encoder");
  ix->add_option("--model", opt.model, "Checkpoint name (default: teacher)");
  auto *se = app.add_subcommand("search", "Print the top-K passages for one question");
  se->add_option("--model", opt.model, "Checkpoint and index name (default: student)");
  se->add_option("--question", opt.question, "Question id")->required();
  se->add_option("--k", opt.k, "Number of passages");
  auto *ev = app.add_subcommand("eval", "Top-K accuracy and answer FF1 for one retriever");
  ev->add_option("--model", opt.model, "Checkpoint and index name (default: student)");
  ev->add_option("--split", opt.split, "train, dev or test (default: test)");
  ev->add_option("--k", opt.k, "Retrieval depth");
  auto *en = app.add_subcommand("ensemble-tune", "Tune score interpolation of two retrievers on dev");
  en->add_option("--a", opt.a, "First retriever (default: teacher)");
  en->add_option("--b", opt.b, "Second retriever (default: student)");
  en->add_option("--k", opt.k, "Retrieval depth");
  auto *wr = app.add_subcommand("wer-report", "Top-K accuracy bucketed by question WER");
  wr->add_option("--retrievers", opt.retrievers, "Comma-separated retriever names (default: teacher,student)")
      ->delimiter(',');
  wr->add_option("--split", opt.split, "train, dev or test (default: test)");
  wr->add_option("--k", opt.k, "Retrieval depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    SetVerbosity(verbose);
    ConfigMap map;
    if (config_path.empty())
      if (const char *env = std::getenv("SPARCH_CONFIG")) config_path = env;
    if (!config_path.empty()) map = ReadProfile(config_path);
    for (const std::string &s : overrides) ApplyOverride(&map, s);
    if (seed) map["seed"] = std::to_string(*seed);
    const RunConfig config = BuildRunConfig(map);
    RunSubcommand(app.get_subcommands().front()->get_name(), config, opt, std::cout);
  } catch (const Error &e) {
    std::cerr << "sparch: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "sparch: internal error: " << e.what() << "\n";
    return 6;
  }
  return 0;
}
