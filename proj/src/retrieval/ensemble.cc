// retrieval/ensemble.cc

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

#include "sparch/retrieval/ensemble.h"

#include <cmath>

#include "sparch/base/error.h"
#include "sparch/retrieval/index.h"

namespace sparch {

void EnsembleWeights::Validate() const {
  if (!std::isfinite(w_a) || !std::isfinite(w_b))
    SPARCH_ERR(kConfig) << "ensemble weights must be finite";
  if (w_a == 0.0 && w_b == 0.0) SPARCH_ERR(kConfig) << "ensemble weights cannot both be zero";
}

ScoreMap EnsembleScores(const ScoreMap &a, const ScoreMap &b, const EnsembleWeights &w) {
  w.Validate();
  std::vector<std::string> missing_b, missing_a;
  for (const auto &[id, s] : a)
    if (!b.count(id)) missing_b.push_back(id);
  for (const auto &[id, s] : b)
    if (!a.count(id)) missing_a.push_back(id);
  if (!missing_a.empty() || !missing_b.empty()) {
    internal::ErrorStream msg;
    msg << "score maps cover different ids;";
    if (!missing_a.empty()) {
      msg << " missing from a:";
      for (const auto &id : missing_a) msg << " " << id;
    }
    if (!missing_b.empty()) {
      msg << " missing from b:";
      for (const auto &id : missing_b) msg << " " << id;
    }
    internal::ErrorThrower(ErrorKind::kData) = msg;
  }
  ScoreMap out;
  for (const auto &[id, s] : a) out.emplace(id, w.w_a * s + w.w_b * b.find(id)->second);
  return out;
}

double EnsembleTopKAccuracy(const ScoreTable &a, const ScoreTable &b, const EnsembleWeights &w,
                            const std::vector<int> &gold_columns, int k) {
  if (a.passage_ids != b.passage_ids || a.scores.rows != b.scores.rows)
    SPARCH_ERR(kData) << "score tables are not aligned";
  if (static_cast<int>(gold_columns.size()) != a.scores.rows)
    SPARCH_ERR(kDimension) << gold_columns.size() << " gold labels for " << a.scores.rows << " rows";
  if (a.scores.rows == 0) SPARCH_ERR(kEmptyInput) << "no questions to score";
  int hits = 0;
  std::vector<double> mixed(a.scores.cols);
  for (int q = 0; q < a.scores.rows; ++q) {
    for (int p = 0; p < a.scores.cols; ++p) mixed[p] = w.w_a * a.scores(q, p) + w.w_b * b.scores(q, p);
    // Gold is in the top k iff fewer than k passages outrank it.
    const int g = gold_columns[q];
    int ahead = 0;
    for (int p = 0; p < a.scores.cols && ahead < k; ++p)
      ahead += mixed[p] > mixed[g] || (mixed[p] == mixed[g] && p < g);
    hits += ahead < k;
  }
  return static_cast<double>(hits) / a.scores.rows;
}

EnsembleTuning TuneEnsembleWeights(const ScoreTable &a, const ScoreTable &b,
                                   const std::vector<int> &gold_columns, int k) {
  if (gold_columns.empty()) SPARCH_ERR(kEmptyInput) << "ensemble tuning needs a non-empty dev set";
  EnsembleTuning tuning;
  int best_step = -1;
  for (int step = 0; step <= 20; ++step) {
    const EnsembleWeights w{step / 20.0, 1.0 - step / 20.0};
    const double acc = EnsembleTopKAccuracy(a, b, w, gold_columns, k);
    tuning.grid.emplace_back(w.w_a, acc);
    const bool better = acc > tuning.best_accuracy ||
                        (acc == tuning.best_accuracy && std::abs(step - 10) < std::abs(best_step - 10));
    if (best_step < 0 || better) {
      best_step = step;
      tuning.best = w;
      tuning.best_accuracy = acc;
    }
  }
  return tuning;
}

}  // namespace sparch
