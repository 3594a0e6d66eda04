// losses/losses.cc

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

#include "sparch/losses/losses.h"

#include <numeric>
#include <vector>

#include "sparch/base/error.h"
#include "sparch/numerics/ops.h"

namespace sparch {

double Similarity(std::span<const double> question, std::span<const double> passage) {
  if (question.size() != passage.size())
    SPARCH_ERR(kDimension) << "similarity of vectors with " << question.size() << " and "
                           << passage.size() << " dims";
  double total = 0.0;
  for (size_t i = 0; i < question.size(); ++i) total += question[i] * passage[i];
  return total;
}

Tensor NllInBatch(const Tensor &questions, const Tensor &passages) {
  if (questions.rank() != 2 || passages.rank() != 2 || questions.shape() != passages.shape())
    SPARCH_ERR(kDimension) << "in-batch NLL needs equal [B x d] matrices, got "
                           << ShapeString(questions.shape()) << " and " << ShapeString(passages.shape());
  std::vector<int> targets(questions.rows());
  std::iota(targets.begin(), targets.end(), 0);
  return CrossEntropyRows(MatMulTransposed(questions, passages), targets);
}

LossTerms TotalLoss(const Batch &student, const std::optional<Batch> &teacher,
                    const KdWeights &weights) {
  if (weights.alpha < 0.0 || weights.beta < 0.0)
    SPARCH_ERR(kConfig) << "distillation weights must be non-negative (alpha=" << weights.alpha
                        << ", beta=" << weights.beta << ")";
  const bool distill = weights.alpha > 0.0 || weights.beta > 0.0;
  if (distill && !teacher)
    SPARCH_ERR(kConfig) << "teacher vectors are required when alpha or beta is positive";
  if (teacher && (teacher->question_vecs.requires_grad() || teacher->passage_vecs.requires_grad()))
    SPARCH_ERR(kConfig) << "teacher vectors must not carry gradients";

  LossTerms terms;
  terms.total = NllInBatch(student.question_vecs, student.passage_vecs);
  terms.nll_student = terms.total.item();
  if (weights.alpha > 0.0) {
    Tensor term = NllInBatch(student.question_vecs, teacher->passage_vecs);
    terms.nll_student_question = term.item();
    terms.total = Add(terms.total, Scale(term, weights.alpha));
  }
  if (weights.beta > 0.0) {
    Tensor term = NllInBatch(teacher->question_vecs, student.passage_vecs);
    terms.nll_student_passage = term.item();
    terms.total = Add(terms.total, Scale(term, weights.beta));
  }
  return terms;
}

}  // namespace sparch
