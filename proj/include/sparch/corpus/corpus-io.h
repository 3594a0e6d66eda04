// sparch/corpus/corpus-io.h

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

#ifndef SPARCH_CORPUS_CORPUS_IO_H_
#define SPARCH_CORPUS_CORPUS_IO_H_

#include <filesystem>

#include "json.hpp"
#include "sparch/corpus/corpus.h"

namespace sparch {

nlohmann::json CorpusConfigToJson(const CorpusConfig &config);
/// Missing keys keep their defaults; unknown keys are a kConfig error.
CorpusConfig CorpusConfigFromJson(const nlohmann::json &j);

/// Directory layout:
///   corpus.json                 generator config and OOV ids
///   manifest.jsonl              one passage or question record per line
///   transcripts/passages.jsonl  channel output with source positions
///   transcripts/questions.jsonl
///   features/<id>.feats         frame features, binary matrix (float32)
void SaveCorpus(const Corpus &corpus, const std::filesystem::path &dir);
Corpus LoadCorpus(const std::filesystem::path &dir);

}  // namespace sparch

#endif  // SPARCH_CORPUS_CORPUS_IO_H_
