// sparch/trainer/trainer.h

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

#ifndef SPARCH_TRAINER_TRAINER_H_
#define SPARCH_TRAINER_TRAINER_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparch/corpus/corpus.h"
#include "sparch/encoders/retriever-model.h"
#include "sparch/losses/losses.h"

namespace sparch {

enum class LrSchedule { kConstant, kLinearDecay };
const char *LrScheduleName(LrSchedule s);
LrSchedule ParseLrSchedule(std::string_view name);

struct TrainConfig {
  int batch_size = 16;
  double learning_rate = 1e-3;
  int warmup_steps = 50;
  int epochs = 30;
  double alpha = 0.5;
  double beta = 0.5;
  uint64_t seed = 0;
  /// Dev evaluation period in steps; 0 evaluates at the end of every epoch.
  int eval_every = 0;
  int top_k = 20;
  /// Global gradient-norm clip; 0 disables.
  double clip_norm = 1.0;
  LrSchedule schedule = LrSchedule::kConstant;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  /// Stop after this many updates; 0 means no limit.
  int max_steps = 0;

  void Validate() const;
  /// Updates performed over the whole run for a given train-set size.
  int TotalSteps(int num_questions) const;
};

/// Linear ramp 0 -> lr over warmup_steps, then constant (or linear decay
/// to 0 at total_steps).
double LearningRate(int step, const TrainConfig &config, int total_steps = 0);

class AdamOptimizer {
 public:
  AdamOptimizer(std::vector<Parameter *> params, const TrainConfig &config);
  /// Applies one update from the accumulated gradients, then clears them.
  /// Frozen parameters are skipped. Returns the pre-clip gradient norm.
  double Step(double learning_rate);

 private:
  std::vector<Parameter *> params_;
  std::vector<std::vector<double>> m_, v_;
  double beta1_, beta2_, eps_, clip_norm_;
  int t_ = 0;
};

/// Frozen teacher vectors for every train question and its gold passage,
/// row-aligned with corpus.questions.
struct TeacherVectors {
  Matrix questions;
  Matrix passages;
};
TeacherVectors ComputeTeacherVectors(const Corpus &corpus, const RetrieverModel &teacher);

/// Loss on one batch of question indices; teacher may be null when
/// alpha == beta == 0.
LossTerms BatchLoss(const Corpus &corpus, const RetrieverModel &model, const TeacherVectors *teacher,
                    std::span<const int> question_indices, const KdWeights &weights);

/// Top-K accuracy of `model` over questions of `split` against the whole archive.
double SplitTopKAccuracy(const Corpus &corpus, const RetrieverModel &model, Split split, int k);

struct StepRecord {
  int step = 0;
  int epoch = 0;
  double loss = 0.0;
  double nll_student = 0.0;
  double nll_student_question = 0.0;
  double nll_student_passage = 0.0;
  double lr = 0.0;
  double grad_norm = 0.0;
};

struct TrainResult {
  RetrieverModel model;  // best dev checkpoint
  int best_step = 0;
  double best_dev_topk = -1.0;
  std::vector<StepRecord> steps;
  std::vector<std::pair<int, double>> dev_history;  // (step, dev top-K)
  std::string teacher_fingerprint_start;
  std::string teacher_fingerprint_end;
};

/// Bi-encoder over channel transcripts, in-batch NLL only.
TrainResult TrainTeacher(const Corpus &corpus, RetrieverConfig model_config,
                         const TrainConfig &config, std::ostream *log = nullptr);

/// Student on the distillation objective. model_config.input selects
/// frames (end-to-end student) or tokens (cascading student). teacher may
/// be null only when alpha == beta == 0; it is frozen for the run.
TrainResult TrainStudent(const Corpus &corpus, RetrieverModel *teacher, RetrieverConfig model_config,
                         const TrainConfig &config, std::ostream *log = nullptr);

}  // namespace sparch

#endif  // SPARCH_TRAINER_TRAINER_H_
