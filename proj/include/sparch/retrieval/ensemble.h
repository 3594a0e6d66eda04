// sparch/retrieval/ensemble.h

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

#ifndef SPARCH_RETRIEVAL_ENSEMBLE_H_
#define SPARCH_RETRIEVAL_ENSEMBLE_H_

#include <map>
#include <string>
#include <vector>

#include "sparch/base/matrix.h"

namespace sparch {

struct EnsembleWeights {
  double w_a = 0.5;
  double w_b = 0.5;
  /// Throws kConfig for non-finite weights or w_a == w_b == 0.
  void Validate() const;
};

using ScoreMap = std::map<std::string, double, std::less<>>;

/// out[id] = w_a * a[id] + w_b * b[id]. Throws kData listing the ids
/// missing from either side.
ScoreMap EnsembleScores(const ScoreMap &a, const ScoreMap &b, const EnsembleWeights &w);

/// Scores of a question set against a whole archive: scores(q, p) for
/// passage passage_ids[p].
struct ScoreTable {
  std::vector<std::string> passage_ids;
  Matrix scores;
};

/// Fraction of rows whose gold column ranks within the top k of
/// w_a * a + w_b * b.
double EnsembleTopKAccuracy(const ScoreTable &a, const ScoreTable &b, const EnsembleWeights &w,
                            const std::vector<int> &gold_columns, int k);

struct EnsembleTuning {
  EnsembleWeights best;
  double best_accuracy = 0.0;
  std::vector<std::pair<double, double>> grid;  // (w_a, accuracy)
};

/// Grid w_a in {0, 0.05, ..., 1}, w_b = 1 - w_a; argmax of top-k accuracy,
/// ties resolved toward w_a = 0.5. Throws kEmptyInput for no questions.
EnsembleTuning TuneEnsembleWeights(const ScoreTable &a, const ScoreTable &b,
                                   const std::vector<int> &gold_columns, int k);

}  // namespace sparch

#endif  // SPARCH_RETRIEVAL_ENSEMBLE_H_
