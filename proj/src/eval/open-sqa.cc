// eval/open-sqa.cc

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

#include "sparch/eval/open-sqa.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "sparch/base/error.h"
#include "sparch/eval/metrics.h"

namespace sparch {

double AnswerScore(const AnswerCandidate &candidate, const AnswerWeights &weights) {
  return weights.w_r * candidate.retriever_score + weights.w_s * candidate.span_score;
}

std::optional<size_t> SelectAnswer(std::span<const AnswerCandidate> candidates, const AnswerWeights &weights) {
  std::optional<size_t> best;
  double best_score = 0.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const double s = AnswerScore(candidates[i], weights);
    if (!best) {
      best = i;
      best_score = s;
      continue;
    }
    const AnswerCandidate &b = candidates[*best];
    const AnswerCandidate &c = candidates[i];
    if (s > best_score ||
        (s == best_score && (c.passage_id < b.passage_id ||
                             (c.passage_id == b.passage_id && c.span.start_s < b.span.start_s)))) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

std::vector<AnswerCandidate> SpanReaderStub(const Transcript &passage, int source_length, double duration_s,
                                            std::span<const int> question_tokens, int window,
                                            const std::string &passage_id, double retriever_score,
                                            int max_candidates, int unk_id) {
  if (window < 1) SPARCH_ERR(kConfig) << "reader window must be at least 1";
  if (source_length < 1 || duration_s <= 0.0)
    SPARCH_ERR(kConfig) << "passage " << passage_id << " needs a positive length and duration";
  std::vector<AnswerCandidate> out;
  const int n = static_cast<int>(passage.tokens.size());
  if (n == 0) return out;
  const std::set<int> wanted(question_tokens.begin(), question_tokens.end());
  const double dt = duration_s / source_length;
  const int w = std::min(window, n);
  for (int start = 0; start + w <= n; ++start) {
    int matches = 0;
    for (int i = start; i < start + w; ++i)
      matches += passage.tokens[i] != unk_id && wanted.count(passage.tokens[i]) > 0;
    AnswerCandidate c;
    c.passage_id = passage_id;
    const double lo = passage.source_positions[start] * dt;
    const double hi = std::min(duration_s, (passage.source_positions[start + w - 1] + 1) * dt);
    c.span = {lo, std::max(lo, hi)};
    c.span_score = static_cast<double>(matches) / w;
    c.retriever_score = retriever_score;
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const AnswerCandidate &a, const AnswerCandidate &b) {
    return a.span_score > b.span_score;
  });
  if (max_candidates > 0 && static_cast<int>(out.size()) > max_candidates) out.resize(max_candidates);
  return out;
}

std::vector<AnswerCandidate> ReadRetrieved(const Corpus &corpus, int question_index, const SearchResult &retrieved,
                                           int max_per_passage) {
  const std::vector<int> &question = corpus.question_transcripts.at(question_index).tokens;
  std::vector<AnswerCandidate> out;
  for (const ScoredPassage &hit : retrieved.hits) {
    const int p = corpus.PassageIndex(hit.id);
    const Passage &passage = corpus.passages[p];
    std::vector<AnswerCandidate> c =
        SpanReaderStub(corpus.passage_transcripts[p], static_cast<int>(passage.tokens.size()),
                       passage.duration_s, question, corpus.config.answer_length, passage.id, hit.score,
                       max_per_passage);
    out.insert(out.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  }
  return out;
}

double AnswerFf1(const Corpus &corpus, int question_index, std::span<const AnswerCandidate> candidates,
                 const AnswerWeights &weights) {
  const std::optional<size_t> pick = SelectAnswer(candidates, weights);
  if (!pick) return 0.0;
  const Question &q = corpus.questions.at(question_index);
  const AnswerCandidate &c = candidates[*pick];
  return Ff1(c.span, q.answer_span, c.passage_id == q.gold_passage_id);
}

double MeanAnswerFf1(const Corpus &corpus, std::span<const int> question_indices,
                     const std::vector<std::vector<AnswerCandidate>> &candidates, const AnswerWeights &weights) {
  if (candidates.size() != question_indices.size())
    SPARCH_ERR(kDimension) << candidates.size() << " candidate lists for " << question_indices.size() << " questions";
  if (question_indices.empty()) SPARCH_ERR(kEmptyInput) << "no questions to answer";
  double total = 0.0;
  for (size_t i = 0; i < question_indices.size(); ++i)
    total += AnswerFf1(corpus, question_indices[i], candidates[i], weights);
  return total / static_cast<double>(question_indices.size());
}

AnswerTuning TuneAnswerWeights(const Corpus &corpus, std::span<const int> question_indices,
                               const std::vector<std::vector<AnswerCandidate>> &candidates) {
  AnswerTuning tuning;
  int best_step = -1;
  for (int step = 0; step <= 20; ++step) {
    const AnswerWeights w{step / 20.0, 1.0 - step / 20.0};
    const double ff1 = MeanAnswerFf1(corpus, question_indices, candidates, w);
    tuning.grid.emplace_back(w.w_r, ff1);
    const bool better =
        ff1 > tuning.best_ff1 || (ff1 == tuning.best_ff1 && std::abs(step - 10) < std::abs(best_step - 10));
    if (best_step < 0 || better) {
      best_step = step;
      tuning.best = w;
      tuning.best_ff1 = ff1;
    }
  }
  return tuning;
}

double GoldPassageFf1(const Corpus &corpus, std::span<const int> question_indices) {
  std::vector<std::vector<AnswerCandidate>> candidates;
  for (int q : question_indices) {
    SearchResult gold;
    gold.k = 1;
    gold.hits.push_back({corpus.questions.at(q).gold_passage_id, 0.0});
    candidates.push_back(ReadRetrieved(corpus, q, gold));
  }
  return MeanAnswerFf1(corpus, question_indices, candidates, {0.0, 1.0});
}

}  // namespace sparch
