// eval/metrics.cc

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

#include "sparch/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparch/base/error.h"

namespace sparch {

RetrievalEvalReport TopKAccuracy(const std::map<std::string, SearchResult> &results,
                                 const std::map<std::string, std::string> &gold, int k) {
  if (k < 1) SPARCH_ERR(kConfig) << "k must be at least 1, got " << k;
  RetrievalEvalReport report;
  report.k = k;
  int hits = 0;
  for (const auto &[question, result] : results) {
    auto it = gold.find(question);
    if (it == gold.end()) SPARCH_ERR(kData) << "question " << question << " has no gold passage";
    const size_t depth = std::min(result.hits.size(), static_cast<size_t>(k));
    bool hit = false;
    for (size_t i = 0; i < depth && !hit; ++i) hit = result.hits[i].id == it->second;
    report.hits[question] = hit;
    hits += hit;
  }
  report.num_questions = static_cast<int>(results.size());
  report.top_k_accuracy = results.empty() ? 0.0 : static_cast<double>(hits) / report.num_questions;
  return report;
}

double Ff1(const TimeSpan &predicted, const TimeSpan &reference, bool predicted_passage_is_gold) {
  if (!predicted_passage_is_gold) return 0.0;
  if (predicted.length() <= 0.0 || reference.length() <= 0.0) return 0.0;
  const double overlap = std::min(predicted.end_s, reference.end_s) - std::max(predicted.start_s, reference.start_s);
  if (overlap <= 0.0) return 0.0;
  const double precision = overlap / predicted.length();
  const double recall = overlap / reference.length();
  return 2.0 * precision * recall / (precision + recall);
}

namespace {

std::vector<double> AverageRanks(std::span<const double> v) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double SpearmanCorrelation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) SPARCH_ERR(kDimension) << "spearman: " << x.size() << " vs " << y.size() << " points";
  if (x.size() < 2) SPARCH_ERR(kUndefined) << "spearman needs at least 2 points";
  const std::vector<double> rx = AverageRanks(x), ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) SPARCH_ERR(kUndefined) << "spearman is undefined for a constant input";
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace sparch
