// sparch/retrieval/index.h

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

#ifndef SPARCH_RETRIEVAL_INDEX_H_
#define SPARCH_RETRIEVAL_INDEX_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparch/base/matrix.h"
#include "sparch/corpus/corpus.h"
#include "sparch/encoders/retriever-model.h"

namespace sparch {

struct PassageIndex {
  std::vector<std::string> ids;  // ascending
  Matrix vectors;                // row i belongs to ids[i]
  std::string encoder_fingerprint;

  int size() const { return static_cast<int>(ids.size()); }
  int dim() const { return vectors.cols; }
};

struct ScoredPassage {
  std::string id;
  double score = 0.0;
  bool operator==(const ScoredPassage &) const = default;
};

struct SearchResult {
  int k = 0;
  std::vector<ScoredPassage> hits;  // scores non-increasing, ties by ascending id
};

/// Rows may come in any order; they are sorted by id. Throws kData on
/// duplicate ids and kEmptyInput for an empty set.
PassageIndex BuildIndex(std::vector<std::string> ids, Matrix vectors, std::string fingerprint);

/// Encodes every passage of the corpus with the model's passage tower.
/// Inputs follow the model: channel transcripts for token models, frames otherwise.
PassageIndex BuildIndex(const Corpus &corpus, const RetrieverModel &model, int num_threads = 1);

/// Question vectors for the given question indices, one row each.
Matrix EncodeQuestions(const Corpus &corpus, const RetrieverModel &model,
                       std::span<const int> question_indices, int num_threads = 1);

Utterance PassageUtterance(const Corpus &corpus, const RetrieverModel &model, int passage_index);
Utterance QuestionUtterance(const Corpus &corpus, const RetrieverModel &model, int question_index);

/// Inner product with every indexed passage, in index order.
std::vector<double> ScoreAll(const PassageIndex &index, std::span<const double> query);

/// Exact top-K by inner product. Throws kConfig for k < 1 and kDimension
/// when the query width differs from the index.
SearchResult SearchTopK(const PassageIndex &index, std::span<const double> query, int k);
/// Same ranking rule applied to precomputed scores aligned with index.ids.
std::vector<int> TopKIndices(std::span<const double> scores, int k);

/// Writes <dir>/<name>.vecs and <dir>/<name>.manifest.
void SaveIndex(const PassageIndex &index, const std::filesystem::path &dir, const std::string &name);
/// Warns when expected_fingerprint is given and differs from the stored one.
PassageIndex LoadIndex(const std::filesystem::path &dir, const std::string &name,
                       const std::optional<std::string> &expected_fingerprint = std::nullopt);

}  // namespace sparch

#endif  // SPARCH_RETRIEVAL_INDEX_H_
