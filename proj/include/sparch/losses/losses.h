// sparch/losses/losses.h

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

#ifndef SPARCH_LOSSES_LOSSES_H_
#define SPARCH_LOSSES_LOSSES_H_

#include <optional>
#include <span>

#include "sparch/numerics/tensor.h"

namespace sparch {

/// Row i of both matrices belongs to the same (question, gold passage) pair;
/// the other rows' passages act as that question's negatives.
struct Batch {
  Tensor question_vecs;  // [B x d]
  Tensor passage_vecs;   // [B x d]
};

struct KdWeights {
  double alpha = 0.5;  // student question vs teacher passages
  double beta = 0.5;   // teacher questions vs student passages
};

/// Plain inner product, no normalization.
double Similarity(std::span<const double> question, std::span<const double> passage);

/// Mean over rows of -log softmax_j(q_i . p_j)[i]. B = 1 gives exactly 0.
Tensor NllInBatch(const Tensor &questions, const Tensor &passages);

struct LossTerms {
  Tensor total;
  double nll_student = 0.0;           // NLL(Q_S, P_S)
  double nll_student_question = 0.0;  // NLL(Q_S, P_T), 0 when alpha == 0
  double nll_student_passage = 0.0;   // NLL(Q_T, P_S), 0 when beta == 0
};

/// NLL(Q_S,P_S) + alpha NLL(Q_S,P_T) + beta NLL(Q_T,P_S). Terms with a zero
/// weight are not evaluated, so alpha = beta = 0 reproduces NllInBatch
/// exactly. Teacher matrices must not require gradients.
LossTerms TotalLoss(const Batch &student, const std::optional<Batch> &teacher,
                    const KdWeights &weights);

}  // namespace sparch

#endif  // SPARCH_LOSSES_LOSSES_H_
