// sparch/eval/metrics.h

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

#ifndef SPARCH_EVAL_METRICS_H_
#define SPARCH_EVAL_METRICS_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sparch/corpus/corpus.h"
#include "sparch/retrieval/index.h"

namespace sparch {

struct RetrievalEvalReport {
  int k = 0;
  int num_questions = 0;
  double top_k_accuracy = 0.0;  // hits / num_questions
  std::map<std::string, bool> hits;
};

/// Hit iff the gold id is among the first k results. Throws kData when a
/// question has no gold id.
RetrievalEvalReport TopKAccuracy(const std::map<std::string, SearchResult> &results,
                                 const std::map<std::string, std::string> &gold, int k);

/// Frame-level F1 over time spans; 0 off the gold passage or for
/// zero-length spans.
double Ff1(const TimeSpan &predicted, const TimeSpan &reference, bool predicted_passage_is_gold);

/// Spearman rank correlation with average ranks for ties. Throws
/// kUndefined for fewer than 2 points or a constant input.
double SpearmanCorrelation(std::span<const double> x, std::span<const double> y);

}  // namespace sparch

#endif  // SPARCH_EVAL_METRICS_H_
