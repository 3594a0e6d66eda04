// sparch/eval/open-sqa.h

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

#ifndef SPARCH_EVAL_OPEN_SQA_H_
#define SPARCH_EVAL_OPEN_SQA_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparch/corpus/corpus.h"
#include "sparch/retrieval/index.h"

namespace sparch {

struct AnswerCandidate {
  std::string passage_id;
  TimeSpan span;
  double span_score = 0.0;
  double retriever_score = 0.0;
};

struct AnswerWeights {
  double w_r = 0.5;
  double w_s = 0.5;
};

double AnswerScore(const AnswerCandidate &candidate, const AnswerWeights &weights);

/// Argmax of AnswerScore; ties go to the smaller passage id, then the
/// earlier start. nullopt for no candidates.
std::optional<size_t> SelectAnswer(std::span<const AnswerCandidate> candidates,
                                   const AnswerWeights &weights);

/// Sliding windows of `window` transcript tokens, each scored by how many
/// of its tokens occur in the question (unk never matches). Spans come
/// from the tokens' source positions at duration / source_length seconds
/// per token. Sorted by score, then start; at most max_candidates.
std::vector<AnswerCandidate> SpanReaderStub(const Transcript &passage, int source_length,
                                            double duration_s, std::span<const int> question_tokens,
                                            int window, const std::string &passage_id,
                                            double retriever_score, int max_candidates = 0,
                                            int unk_id = 0);

/// Reader input for one question: candidates from its top-K passages.
std::vector<AnswerCandidate> ReadRetrieved(const Corpus &corpus, int question_index,
                                           const SearchResult &retrieved, int max_per_passage = 0);

/// FF1 of the answer selected from candidates for one question.
double AnswerFf1(const Corpus &corpus, int question_index, std::span<const AnswerCandidate> candidates,
                 const AnswerWeights &weights);

/// Mean per-question FF1 (0 for unanswered questions).
double MeanAnswerFf1(const Corpus &corpus, std::span<const int> question_indices,
                     const std::vector<std::vector<AnswerCandidate>> &candidates,
                     const AnswerWeights &weights);

struct AnswerTuning {
  AnswerWeights best;
  double best_ff1 = 0.0;
  std::vector<std::pair<double, double>> grid;  // (w_r, mean FF1)
};

/// Grid w_r in {0, 0.05, ..., 1}, w_s = 1 - w_r; ties go toward w_r = 0.5.
AnswerTuning TuneAnswerWeights(const Corpus &corpus, std::span<const int> question_indices,
                               const std::vector<std::vector<AnswerCandidate>> &candidates);

/// Mean FF1 of the span reader when handed each question's gold passage.
double GoldPassageFf1(const Corpus &corpus, std::span<const int> question_indices);

}  // namespace sparch

#endif  // SPARCH_EVAL_OPEN_SQA_H_
