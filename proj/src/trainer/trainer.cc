// trainer/trainer.cc

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

#include "sparch/trainer/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "sparch/base/error.h"
#include "sparch/base/hash.h"
#include "sparch/base/random.h"
#include "sparch/numerics/ops.h"
#include "sparch/retrieval/index.h"

namespace sparch {

const char *LrScheduleName(LrSchedule s) {
  return s == LrSchedule::kConstant ? "constant" : "linear_decay";
}

LrSchedule ParseLrSchedule(std::string_view name) {
  if (name == "constant") return LrSchedule::kConstant;
  if (name == "linear_decay") return LrSchedule::kLinearDecay;
  SPARCH_ERR(kConfig) << "unknown lr schedule '" << name << "' (expected constant|linear_decay)";
}

void TrainConfig::Validate() const {
  if (batch_size < 2) SPARCH_ERR(kConfig) << "batch_size must be >= 2 for in-batch negatives";
  if (!(learning_rate > 0.0)) SPARCH_ERR(kConfig) << "learning_rate must be positive";
  if (warmup_steps < 0 || epochs < 0 || eval_every < 0 || max_steps < 0)
    SPARCH_ERR(kConfig) << "negative step or epoch count";
  if (alpha < 0.0 || beta < 0.0) SPARCH_ERR(kConfig) << "alpha and beta must be non-negative";
  if (top_k < 1) SPARCH_ERR(kConfig) << "top_k must be at least 1";
  if (clip_norm < 0.0) SPARCH_ERR(kConfig) << "clip_norm must be non-negative";
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0 && adam_eps > 0.0))
    SPARCH_ERR(kConfig) << "invalid Adam settings";
}

int TrainConfig::TotalSteps(int num_questions) const {
  const int steps = (num_questions / batch_size) * epochs;
  return max_steps > 0 ? std::min(steps, max_steps) : steps;
}

double LearningRate(int step, const TrainConfig &config, int total_steps) {
  if (step < 0) SPARCH_ERR(kConfig) << "negative step " << step;
  if (step < config.warmup_steps)
    return config.learning_rate * static_cast<double>(step) / config.warmup_steps;
  if (config.schedule == LrSchedule::kLinearDecay && total_steps > config.warmup_steps) {
    const double left = static_cast<double>(total_steps - step) / (total_steps - config.warmup_steps);
    return config.learning_rate * std::max(0.0, left);
  }
  return config.learning_rate;
}

AdamOptimizer::AdamOptimizer(std::vector<Parameter *> params, const TrainConfig &config)
    : params_(std::move(params)),
      beta1_(config.adam_beta1),
      beta2_(config.adam_beta2),
      eps_(config.adam_eps),
      clip_norm_(config.clip_norm) {
  for (Parameter *p : params_) {
    m_.emplace_back(p->tensor().size(), 0.0);
    v_.emplace_back(p->tensor().size(), 0.0);
  }
}

double AdamOptimizer::Step(double learning_rate) {
  double norm2 = 0.0;
  for (Parameter *p : params_)
    if (!p->frozen())
      for (double g : p->tensor().grad()) norm2 += g * g;
  const double norm = std::sqrt(norm2);
  const double clip = clip_norm_ > 0.0 && norm > clip_norm_ ? clip_norm_ / norm : 1.0;
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, t_), c2 = 1.0 - std::pow(beta2_, t_);
  for (size_t i = 0; i < params_.size(); ++i) {
    Parameter *p = params_[i];
    if (p->frozen()) continue;
    std::span<const double> g = p->tensor().grad();
    std::span<double> w = p->tensor().mutable_data();
    std::vector<double> &m = m_[i], &v = v_[i];
    for (size_t j = 0; j < w.size(); ++j) {
      const double gj = g[j] * clip;
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * gj;
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * gj * gj;
      w[j] -= learning_rate * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps_);
    }
    p->tensor().ZeroGrad();
  }
  return norm;
}

TeacherVectors ComputeTeacherVectors(const Corpus &corpus, const RetrieverModel &teacher) {
  const std::vector<int> train = corpus.QuestionIndices(Split::kTrain);
  std::vector<int> gold;
  for (int q : train) gold.push_back(corpus.GoldPassageIndex(q));
  const int n = static_cast<int>(corpus.questions.size()), d = teacher.config().encoder.dim;
  TeacherVectors out{Matrix(n, d), Matrix(n, d)};
  NoGradGuard no_grad;
  for (size_t i = 0; i < train.size(); ++i) {
    Tensor q = teacher.EncodeQuestion(QuestionUtterance(corpus, teacher, train[i]));
    Tensor p = teacher.EncodePassage(PassageUtterance(corpus, teacher, gold[i]));
    std::copy(q.data().begin(), q.data().end(), out.questions.Row(train[i]).begin());
    std::copy(p.data().begin(), p.data().end(), out.passages.Row(train[i]).begin());
  }
  return out;
}

LossTerms BatchLoss(const Corpus &corpus, const RetrieverModel &model, const TeacherVectors *teacher,
                    std::span<const int> question_indices, const KdWeights &weights) {
  std::vector<Tensor> qs, ps;
  for (int q : question_indices) {
    qs.push_back(model.EncodeQuestion(QuestionUtterance(corpus, model, q)));
    ps.push_back(model.EncodePassage(PassageUtterance(corpus, model, corpus.GoldPassageIndex(q))));
  }
  Batch student{ConcatRows(qs), ConcatRows(ps)};
  std::optional<Batch> teacher_batch;
  if (teacher != nullptr) {
    const int b = static_cast<int>(question_indices.size()), d = teacher->questions.cols;
    Matrix tq(b, d), tp(b, d);
    for (int i = 0; i < b; ++i) {
      auto qrow = teacher->questions.Row(question_indices[i]);
      auto prow = teacher->passages.Row(question_indices[i]);
      std::copy(qrow.begin(), qrow.end(), tq.Row(i).begin());
      std::copy(prow.begin(), prow.end(), tp.Row(i).begin());
    }
    teacher_batch = Batch{Tensor::FromMatrix(tq), Tensor::FromMatrix(tp)};
  }
  return TotalLoss(student, teacher_batch, weights);
}

double SplitTopKAccuracy(const Corpus &corpus, const RetrieverModel &model, Split split, int k) {
  const std::vector<int> questions = corpus.QuestionIndices(split);
  if (questions.empty()) SPARCH_ERR(kEmptyInput) << "no " << SplitName(split) << " questions";
  const PassageIndex index = BuildIndex(corpus, model);
  const Matrix qvecs = EncodeQuestions(corpus, model, questions);
  int hits = 0;
  for (size_t i = 0; i < questions.size(); ++i) {
    const int gold = corpus.GoldPassageIndex(questions[i]);
    for (int p : TopKIndices(ScoreAll(index, qvecs.Row(static_cast<int>(i))), k)) hits += p == gold;
  }
  return static_cast<double>(hits) / questions.size();
}

namespace {

void LogJson(std::ostream *log, const nlohmann::json &record) {
  if (log != nullptr) *log << record.dump() << "\n";
}

TrainResult TrainRetriever(const Corpus &corpus, RetrieverModel model, const TeacherVectors *teacher,
                           const KdWeights &weights, const TrainConfig &config, std::ostream *log) {
  config.Validate();
  std::vector<int> train = corpus.QuestionIndices(Split::kTrain);
  if (static_cast<int>(train.size()) < config.batch_size)
    SPARCH_ERR(kConfig) << "train split has " << train.size() << " questions, fewer than one batch of "
                        << config.batch_size;
  const int steps_per_epoch = static_cast<int>(train.size()) / config.batch_size;
  const int total_steps = config.TotalSteps(static_cast<int>(train.size()));

  TrainResult result;
  AdamOptimizer adam(model.Parameters(), config);
  Rng rng(MixSeed(config.seed, 0x7a11));
  std::vector<std::vector<double>> best = model.Snapshot();

  auto evaluate = [&](int step) {
    const double acc = SplitTopKAccuracy(corpus, model, Split::kDev, config.top_k);
    result.dev_history.emplace_back(step, acc);
    LogJson(log, {{"step", step}, {"dev_topk", acc}, {"k", config.top_k}});
    SPARCH_LOG << "step " << step << " dev top-" << config.top_k << " " << acc;
    if (acc > result.best_dev_topk) {
      result.best_dev_topk = acc;
      result.best_step = step;
      best = model.Snapshot();
    }
  };

  int step = 0;
  for (int epoch = 0; epoch < config.epochs && step < total_steps; ++epoch) {
    rng.Shuffle(&train);
    for (int b = 0; b < steps_per_epoch && step < total_steps; ++b) {
      std::span<const int> batch(train.data() + static_cast<size_t>(b) * config.batch_size,
                                 config.batch_size);
      LossTerms terms;
      try {
        terms = BatchLoss(corpus, model, teacher, batch, weights);
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::kNonFinite) throw;
        SPARCH_ERR(kDivergence) << "non-finite scores at step " << step + 1 << ": " << e.what();
      }
      const double loss = terms.total.item();
      if (!std::isfinite(loss)) SPARCH_ERR(kDivergence) << "loss is " << loss << " at step " << step + 1;
      terms.total.Backward();
      ++step;
      const double lr = LearningRate(step, config, total_steps);
      const double grad_norm = adam.Step(lr);
      StepRecord rec{step, epoch, loss, terms.nll_student, terms.nll_student_question,
                     terms.nll_student_passage, lr, grad_norm};
      result.steps.push_back(rec);
      LogJson(log, {{"step", step},
                    {"epoch", epoch},
                    {"loss", loss},
                    {"nll_ss", rec.nll_student},
                    {"nll_st", rec.nll_student_question},
                    {"nll_ts", rec.nll_student_passage},
                    {"lr", lr},
                    {"grad_norm", grad_norm}});
      if (config.eval_every > 0 && step % config.eval_every == 0) evaluate(step);
    }
    if (config.eval_every == 0) evaluate(step);
  }
  if (result.dev_history.empty() || result.dev_history.back().first != step) evaluate(step);
  model.Restore(best);
  result.model = std::move(model);
  return result;
}

}  // namespace

TrainResult TrainTeacher(const Corpus &corpus, RetrieverConfig model_config, const TrainConfig &config,
                         std::ostream *log) {
  model_config.input = InputKind::kTokens;
  model_config.tokens.vocab_size = corpus.vocab_size();
  return TrainRetriever(corpus, RetrieverModel(model_config), nullptr, {0.0, 0.0}, config, log);
}

TrainResult TrainStudent(const Corpus &corpus, RetrieverModel *teacher, RetrieverConfig model_config,
                         const TrainConfig &config, std::ostream *log) {
  const KdWeights weights{config.alpha, config.beta};
  const bool distill = weights.alpha > 0.0 || weights.beta > 0.0;
  if (distill && teacher == nullptr)
    SPARCH_ERR(kConfig) << "a teacher model is required when alpha or beta is positive";
  if (model_config.input == InputKind::kTokens) model_config.tokens.vocab_size = corpus.vocab_size();
  if (model_config.input == InputKind::kFrames) model_config.features.input_dim = corpus.config.feature_dim;

  std::optional<TeacherVectors> cached;
  std::string start;
  if (teacher != nullptr) {
    teacher->SetFrozen(true);
    start = teacher->Fingerprint();
    if (distill) cached = ComputeTeacherVectors(corpus, *teacher);
  }
  TrainResult result = TrainRetriever(corpus, RetrieverModel(model_config),
                                      cached ? &*cached : nullptr, weights, config, log);
  if (teacher != nullptr) {
    result.teacher_fingerprint_start = start;
    result.teacher_fingerprint_end = teacher->Fingerprint();
    if (start != result.teacher_fingerprint_end)
      SPARCH_ERR(kFingerprint) << "teacher parameters changed during student training";
  }
  return result;
}

}  // namespace sparch
