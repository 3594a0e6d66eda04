// tests/acceptance/acceptance.cc

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

// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
//
//   acceptance [--only 1,3,8] [--seeds 3]
//
// Criteria 5, 6, 7 and 9 train on the desk profile (configs/desk.profile)
// and take most of the runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparch/base/error.h"
#include "sparch/cli/run-config.h"
#include "sparch/corpus/wer.h"
#include "sparch/eval/metrics.h"
#include "sparch/eval/open-sqa.h"
#include "sparch/eval/wer-buckets.h"
#include "sparch/losses/losses.h"
#include "sparch/numerics/attention.h"
#include "sparch/numerics/grad-check.h"
#include "sparch/retrieval/ensemble.h"
#include "sparch/retrieval/index.h"
#include "sparch/trainer/trainer.h"
#include "test-util.h"

namespace sparch {
namespace {

namespace fs = std::filesystem;
using testing::RandomTensor;
using testing::Readout;

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char *format, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. gradient suite

struct OpCheck {
  std::string name;
  double tolerance;
  std::function<GradCheckReport(uint64_t)> run;
};

std::vector<OpCheck> GradientSuite() {
  const double elementwise = 1e-6, general = 1e-4;
  auto binary = [](Tensor (*op)(const Tensor &, const Tensor &)) {
    return [op](uint64_t seed) {
      Rng rng(seed);
      Tensor a = RandomTensor({3, 5}, &rng), b = RandomTensor({3, 5}, &rng), r = RandomTensor({3, 5}, &rng, false);
      return CheckGradients([&] { return Readout(op(a, b), r); }, {{"a", a}, {"b", b}});
    };
  };
  std::vector<OpCheck> ops;
  ops.push_back({"add", elementwise, binary(Add)});
  ops.push_back({"sub", elementwise, binary(Sub)});
  ops.push_back({"mul", elementwise, binary(Mul)});
  ops.push_back({"scale", elementwise, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({3, 5}, &rng), r = RandomTensor({3, 5}, &rng, false);
                   const double f = rng.Normal();
                   return CheckGradients([&] { return Readout(Scale(a, f), r); }, {{"a", a}});
                 }});
  ops.push_back({"gelu", elementwise, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({3, 5}, &rng, true, 2.0), r = RandomTensor({3, 5}, &rng, false);
                   return CheckGradients([&] { return Readout(Gelu(a), r); }, {{"a", a}});
                 }});
  ops.push_back({"add_bias", elementwise, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({3, 5}, &rng), b = RandomTensor({5}, &rng), r = RandomTensor({3, 5}, &rng, false);
                   return CheckGradients([&] { return Readout(AddBias(a, b), r); }, {{"a", a}, {"bias", b}});
                 }});
  ops.push_back({"matmul", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({3, 4}, &rng), b = RandomTensor({4, 5}, &rng), r = RandomTensor({3, 5}, &rng, false);
                   return CheckGradients([&] { return Readout(MatMul(a, b), r); }, {{"a", a}, {"b", b}});
                 }});
  ops.push_back({"matmul_transposed", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({3, 4}, &rng), b = RandomTensor({5, 4}, &rng), r = RandomTensor({3, 5}, &rng, false);
                   return CheckGradients([&] { return Readout(MatMulTransposed(a, b), r); }, {{"a", a}, {"b", b}});
                 }});
  ops.push_back({"softmax", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({3, 5}, &rng, true, 2.0), r = RandomTensor({3, 5}, &rng, false);
                   return CheckGradients([&] { return Readout(Softmax(a), r); }, {{"a", a}});
                 }});
  ops.push_back({"layer_norm", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({3, 6}, &rng), g = RandomTensor({6}, &rng), b = RandomTensor({6}, &rng);
                   Tensor r = RandomTensor({3, 6}, &rng, false);
                   return CheckGradients([&] { return Readout(LayerNorm(a, g, b, 1e-5), r); },
                                         {{"a", a}, {"gamma", g}, {"beta", b}});
                 }});
  ops.push_back({"instance_norm", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({7, 3}, &rng), r = RandomTensor({7, 3}, &rng, false);
                   return CheckGradients([&] { return Readout(InstanceNorm(a, 1e-5), r); }, {{"a", a}});
                 }});
  ops.push_back({"conv1d", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor x = RandomTensor({13, 3}, &rng), k = RandomTensor({4, 3, 2}, &rng);
                   Tensor r = RandomTensor({4, 2}, &rng, false);
                   return CheckGradients([&] { return Readout(Conv1d(x, k, 3), r); }, {{"x", x}, {"kernel", k}});
                 }});
  ops.push_back({"embedding_lookup", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor t = RandomTensor({6, 4}, &rng), r = RandomTensor({4, 4}, &rng, false);
                   const int ids[] = {rng.Index(6), rng.Index(6), 2, 2};
                   return CheckGradients([&] { return Readout(EmbeddingLookup(t, ids), r); }, {{"table", t}});
                 }});
  ops.push_back({"slice", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({4, 5}, &rng), r = RandomTensor({2, 3}, &rng, false);
                   return CheckGradients([&] { return Readout(SliceCols(SliceRows(a, 1, 2), 2, 3), r); }, {{"a", a}});
                 }});
  ops.push_back({"select_row_dot", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({4, 5}, &rng), v = RandomTensor({5}, &rng);
                   return CheckGradients([&] { return Dot(SelectRow(a, 3), v); }, {{"a", a}, {"v", v}});
                 }});
  ops.push_back({"concat", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({2, 3}, &rng), b = RandomTensor({2, 3}, &rng);
                   Tensor r1 = RandomTensor({4, 3}, &rng, false), r2 = RandomTensor({2, 6}, &rng, false);
                   return CheckGradients(
                       [&] {
                         Tensor parts[] = {a, b};
                         return Add(Readout(ConcatRows(parts), r1), Readout(ConcatCols(parts), r2));
                       },
                       {{"a", a}, {"b", b}});
                 }});
  ops.push_back({"sum", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({3, 4}, &rng);
                   return CheckGradients([&] { return Sum(Mul(a, a)); }, {{"a", a}});
                 }});
  ops.push_back({"cross_entropy_rows", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor a = RandomTensor({4, 5}, &rng, true, 2.0);
                   const int t[] = {rng.Index(5), rng.Index(5), rng.Index(5), rng.Index(5)};
                   return CheckGradients([&] { return CrossEntropyRows(a, t); }, {{"logits", a}});
                 }});
  ops.push_back({"self_attention_block", general, [](uint64_t seed) {
                   Rng rng(seed);
                   AttentionBlockParams p = InitAttentionBlock(8, 2, 16, 1.0, "blk", &rng);
                   for (Parameter *q : p.Parameters())
                     for (double &v : q->tensor().mutable_data()) v += rng.Normal(0.0, 0.1);
                   Tensor x = RandomTensor({4, 8}, &rng), r = RandomTensor({4, 8}, &rng, false);
                   auto inputs = ToNamedTensors(p.Parameters());
                   inputs.push_back({"x", x});
                   return CheckGradients([&] { return Readout(SelfAttentionBlock(x, p), r); }, inputs);
                 }});
  ops.push_back({"nll_in_batch", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Tensor q = RandomTensor({4, 6}, &rng), p = RandomTensor({4, 6}, &rng);
                   return CheckGradients([&] { return NllInBatch(q, p); }, {{"q", q}, {"p", p}});
                 }});
  ops.push_back({"total_loss", general, [](uint64_t seed) {
                   Rng rng(seed);
                   Batch s{RandomTensor({4, 6}, &rng), RandomTensor({4, 6}, &rng)};
                   Batch t{RandomTensor({4, 6}, &rng, false), RandomTensor({4, 6}, &rng, false)};
                   const KdWeights w{rng.Uniform(0, 1), rng.Uniform(0, 1)};
                   return CheckGradients([&] { return TotalLoss(s, t, w).total; },
                                         {{"q_s", s.question_vecs}, {"p_s", s.passage_vecs}});
                 }});
  ops.push_back({"student_forward_total_loss", general, [](uint64_t seed) {
                   const Corpus corpus = GenerateCorpus(testing::TinyCorpusConfig(seed));
                   RetrieverConfig tc =
                       testing::TinyRetrieverConfig(InputKind::kTokens, corpus.vocab_size(), corpus.config.feature_dim);
                   tc.seed = seed + 100;
                   RetrieverModel teacher(tc);
                   teacher.SetFrozen(true);
                   const TeacherVectors tv = ComputeTeacherVectors(corpus, teacher);
                   RetrieverConfig sc = tc;
                   sc.input = InputKind::kFrames;
                   sc.seed = seed;
                   RetrieverModel student(sc);
                   const std::vector<int> batch = {0, 1};
                   GradCheckOptions opt;
                   opt.max_coords_per_tensor = 3;
                   opt.seed = seed;
                   return CheckGradients([&] { return BatchLoss(corpus, student, &tv, batch, {0.5, 0.5}).total; },
                                         ToNamedTensors(student.Parameters()), opt);
                 }});
  return ops;
}

Outcome Criterion1() {
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  std::string worst;
  double worst_ratio = 0.0;
  const std::vector<OpCheck> suite = GradientSuite();
  for (const OpCheck &op : suite) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const GradCheckReport r = op.run(1000 + seed);
      const bool ok = r.finite && r.max_rel_error < op.tolerance;
      failures += !ok;
      if (r.max_rel_error / op.tolerance > worst_ratio) {
        worst_ratio = r.max_rel_error / op.tolerance;
        worst = op.name + Fmt(" %.2e", r.max_rel_error);
      }
    }
  }
  const double secs = Seconds(start);
  return {failures == 0 && secs < 120.0,
          std::to_string(suite.size()) + " checks x 20 seeds, " + std::to_string(failures) +
              " failures, worst " + worst + Fmt(", %.1fs", secs)};
}

// ---------------------------------------------------------------------------
// 2. loss identities

Outcome Criterion2() {
  double uniform_err = 0.0, ablation_err = 0.0, teacher_grad = 0.0;
  Rng rng(2);
  for (int b = 1; b <= 16; ++b) {
    std::vector<double> row(8);
    for (double &x : row) x = rng.Normal();
    std::vector<double> q, p;
    for (int i = 0; i < b; ++i) {
      q.insert(q.end(), row.begin(), row.end());
      p.insert(p.end(), row.begin(), row.end());
    }
    const double nll = NllInBatch(Tensor::FromData({b, 8}, q), Tensor::FromData({b, 8}, p)).item();
    uniform_err = std::max(uniform_err, std::abs(nll - std::log(static_cast<double>(b))));
  }
  for (int t = 0; t < 20; ++t) {
    Batch s{RandomTensor({5, 6}, &rng), RandomTensor({5, 6}, &rng)};
    Batch teacher{RandomTensor({5, 6}, &rng, false), RandomTensor({5, 6}, &rng, false)};
    const double a = TotalLoss(s, teacher, {0.0, 0.0}).total.item();
    const double b = NllInBatch(s.question_vecs, s.passage_vecs).item();
    ablation_err = std::max(ablation_err, std::abs(a - b));
  }
  // Teacher vectors built through a frozen model inside the same graph.
  const Corpus corpus = GenerateCorpus(testing::TinyCorpusConfig(2));
  RetrieverConfig tc = testing::TinyRetrieverConfig(InputKind::kTokens, corpus.vocab_size(), corpus.config.feature_dim);
  RetrieverModel teacher(tc);
  teacher.SetFrozen(true);
  RetrieverConfig sc = tc;
  sc.input = InputKind::kFrames;
  RetrieverModel student(sc);
  std::vector<Tensor> sq, sp, tq, tp;
  for (int q : {0, 1, 2}) {
    const int g = corpus.GoldPassageIndex(q);
    sq.push_back(student.EncodeQuestion(QuestionUtterance(corpus, student, q)));
    sp.push_back(student.EncodePassage(PassageUtterance(corpus, student, g)));
    tq.push_back(teacher.EncodeQuestion(QuestionUtterance(corpus, teacher, q)));
    tp.push_back(teacher.EncodePassage(PassageUtterance(corpus, teacher, g)));
  }
  Batch s{ConcatRows(sq), ConcatRows(sp)}, t{ConcatRows(tq), ConcatRows(tp)};
  const bool detached = !t.question_vecs.requires_grad() && !t.passage_vecs.requires_grad();
  TotalLoss(s, t, {0.5, 0.5}).total.Backward();
  for (const Parameter *p : std::as_const(teacher).Parameters())
    for (double g : p->tensor().grad()) teacher_grad = std::max(teacher_grad, std::abs(g));
  double student_grad = 0.0;
  for (const Parameter *p : std::as_const(student).Parameters())
    for (double g : p->tensor().grad()) student_grad = std::max(student_grad, std::abs(g));

  const bool pass = uniform_err <= 1e-12 && ablation_err <= 1e-12 && teacher_grad == 0.0 && detached &&
                    student_grad > 0.0;
  return {pass, Fmt("|nll-lnB| %.1e, |total-nll| %.1e, max |teacher grad| %g, max |student grad| %.2e", uniform_err,
                    ablation_err, teacher_grad, student_grad)};
}

// ---------------------------------------------------------------------------
// 3. search exactness

Outcome Criterion3() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(3);
  const int n = 1000, d = 16;
  Matrix v(n, d);
  for (double &x : v.data) x = rng.Normal();
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(100000 + i));
  const PassageIndex index = BuildIndex(ids, v, "fp");
  int mismatches = 0, queries = 0;
  for (int k : {1, 5, 20}) {
    for (int t = 0; t < 50; ++t, ++queries) {
      std::vector<double> q(d);
      for (double &x : q) x = rng.Normal();
      std::vector<std::pair<double, std::string>> all;
      for (int p = 0; p < n; ++p) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += q[j] * index.vectors(p, j);
        all.emplace_back(-s, index.ids[p]);
      }
      std::sort(all.begin(), all.end());
      const SearchResult got = SearchTopK(index, q, k);
      if (static_cast<int>(got.hits.size()) != k) {
        ++mismatches;
        continue;
      }
      for (int i = 0; i < k; ++i) mismatches += got.hits[i].id != all[i].second || got.hits[i].score != -all[i].first;
    }
  }
  const double secs = Seconds(start);
  return {mismatches == 0 && secs < 60.0,
          std::to_string(queries) + " queries, " + std::to_string(mismatches) + " mismatches" + Fmt(", %.2fs", secs)};
}

// ---------------------------------------------------------------------------
// 4. metric correctness

int EditDistanceOracle(const std::vector<int> &a, const std::vector<int> &b) {
  int table[9][9];
  for (size_t i = 0; i <= a.size(); ++i) table[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= b.size(); ++j) table[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i)
    for (size_t j = 1; j <= b.size(); ++j)
      table[i][j] = std::min({table[i - 1][j] + 1, table[i][j - 1] + 1, table[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
  return table[a.size()][b.size()];
}

Outcome Criterion4() {
  std::vector<std::string> failed;
  if (std::abs(Ff1({0, 4}, {2, 6}, true) - 0.5) > 1e-12) failed.push_back("ff1 hand case");
  if (Ff1({1.5, 3.25}, {1.5, 3.25}, true) != 1.0) failed.push_back("ff1 identity");
  if (Ff1({1.5, 3.25}, {1.5, 3.25}, false) != 0.0) failed.push_back("ff1 non-gold");

  Rng rng(4);
  std::map<std::string, SearchResult> results;
  std::map<std::string, std::string> gold;
  for (int q = 0; q < 200; ++q) {
    std::vector<std::string> ids;
    for (int p = 0; p < 50; ++p) ids.push_back("p" + std::to_string(p));
    rng.Shuffle(&ids);
    SearchResult r;
    for (int i = 0; i < 50; ++i) r.hits.push_back({ids[i], -static_cast<double>(i)});
    results["q" + std::to_string(q)] = r;
    gold["q" + std::to_string(q)] = "p" + std::to_string(rng.Index(50));
  }
  double prev = -1.0;
  for (int k = 1; k <= 50; ++k) {
    const double acc = TopKAccuracy(results, gold, k).top_k_accuracy;
    if (acc < prev) failed.push_back("topk not monotone at k=" + std::to_string(k));
    prev = acc;
  }

  std::vector<std::vector<int>> seqs = {{}};
  for (size_t i = 0; i < seqs.size(); ++i)
    if (seqs[i].size() < 8)
      for (int t = 0; t < 3; ++t) {
        std::vector<int> s = seqs[i];
        s.push_back(t);
        seqs.push_back(std::move(s));
      }
  long long pairs = 0, wer_mismatch = 0;
  for (const auto &ref : seqs) {
    for (const auto &hyp : seqs) {
      ++pairs;
      const EditCounts c = AlignEditCounts(ref, hyp);
      const int oracle = EditDistanceOracle(ref, hyp);
      bool ok = c.errors() == oracle && c.reference_length == static_cast<int>(ref.size()) &&
                c.reference_length - c.deletions + c.insertions == static_cast<int>(hyp.size());
      if (!ref.empty()) ok = ok && WordErrorRate(ref, hyp) == static_cast<double>(oracle) / ref.size();
      wer_mismatch += !ok;
    }
  }
  bool empty_ref_undefined = false;
  try {
    WordErrorRate(std::vector<int>{}, std::vector<int>{1});
  } catch (const Error &e) {
    empty_ref_undefined = e.kind() == ErrorKind::kUndefined;
  }
  if (wer_mismatch > 0) failed.push_back(std::to_string(wer_mismatch) + " WER mismatches");
  if (!empty_ref_undefined) failed.push_back("empty reference");
  std::string detail = "ff1 cases, topk monotone over k=1..50, WER vs DP on " + std::to_string(pairs) + " pairs";
  for (const auto &f : failed) detail += "; FAILED " + f;
  return {failed.empty(), detail};
}

// ---------------------------------------------------------------------------
// 5, 6, 9: desk corpus, teacher and two students per seed. 7: jittered corpus.

struct ScoredSplit {
  ScoreTable table;
  std::vector<int> gold;  // column of the gold passage
  std::vector<int> questions;
};

ScoredSplit ScoreSplit(const Corpus &corpus, const RetrieverModel &model, Split split, const PassageIndex &index) {
  ScoredSplit out;
  out.questions = corpus.QuestionIndices(split);
  const Matrix qv = EncodeQuestions(corpus, model, out.questions);
  out.table.passage_ids = index.ids;
  out.table.scores = Matrix(static_cast<int>(out.questions.size()), index.size());
  for (size_t i = 0; i < out.questions.size(); ++i) {
    const std::vector<double> s = ScoreAll(index, qv.Row(static_cast<int>(i)));
    std::copy(s.begin(), s.end(), out.table.scores.Row(static_cast<int>(i)).begin());
    out.gold.push_back(corpus.GoldPassageIndex(out.questions[i]));
  }
  return out;
}

std::vector<bool> HitsAtK(const ScoredSplit &s, int k) {
  std::vector<bool> hits;
  for (size_t i = 0; i < s.questions.size(); ++i) {
    bool hit = false;
    for (int p : TopKIndices(s.table.scores.Row(static_cast<int>(i)), k)) hit = hit || p == s.gold[i];
    hits.push_back(hit);
  }
  return hits;
}

double Accuracy(const std::vector<bool> &hits) {
  return hits.empty() ? 0.0 : static_cast<double>(std::count(hits.begin(), hits.end(), true)) / hits.size();
}

struct SeedRun {
  double teacher_test = 0, kd_test = 0, nokd_test = 0;
  double teacher_dev = 0, kd_dev = 0;
  double ens_dev = 0, ens_test = 0, ens_wa = 0;
  double ff1_tuned = 0, ff1_span = 0, tuned_wr = 0;
  bool span_only_ranking = true;
};

RunConfig DeskConfig(uint64_t seed) {
  ConfigMap m = ReadProfile(fs::path(SPARCH_SOURCE_DIR) / "configs" / "desk.profile");
  m["seed"] = std::to_string(seed);
  return BuildRunConfig(m);
}

RetrieverConfig StudentModel(const RunConfig &rc) {
  RetrieverConfig m = rc.model;
  m.input = rc.student_input;
  return m;
}

bool SpanOnlyRankingMatches(std::vector<AnswerCandidate> c) {
  std::vector<AnswerCandidate> by_score = c, by_span = c;
  std::stable_sort(by_score.begin(), by_score.end(), [](const auto &a, const auto &b) {
    return AnswerScore(a, {0.0, 1.0}) > AnswerScore(b, {0.0, 1.0});
  });
  std::stable_sort(by_span.begin(), by_span.end(), [](const auto &a, const auto &b) { return a.span_score > b.span_score; });
  for (size_t i = 0; i < c.size(); ++i)
    if (by_score[i].passage_id != by_span[i].passage_id || !(by_score[i].span == by_span[i].span)) return false;
  if (c.empty()) return true;
  const size_t pick = *SelectAnswer(c, {0.0, 1.0});
  double best = -1;
  for (const auto &x : c) best = std::max(best, x.span_score);
  return c[pick].span_score == best;
}

SeedRun RunDeskSeed(uint64_t seed, std::ostream &log) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig rc = DeskConfig(seed);
  const Corpus corpus = GenerateCorpus(rc.corpus);
  const int k = rc.k;
  TrainResult teacher = TrainTeacher(corpus, rc.model, rc.teacher);
  TrainResult kd = TrainStudent(corpus, &teacher.model, StudentModel(rc), rc.student);
  TrainConfig nokd_train = rc.student;
  nokd_train.alpha = nokd_train.beta = 0.0;
  TrainResult nokd = TrainStudent(corpus, nullptr, StudentModel(rc), nokd_train);

  const PassageIndex ti = BuildIndex(corpus, teacher.model), si = BuildIndex(corpus, kd.model),
                     ni = BuildIndex(corpus, nokd.model);
  const ScoredSplit t_dev = ScoreSplit(corpus, teacher.model, Split::kDev, ti),
                    t_test = ScoreSplit(corpus, teacher.model, Split::kTest, ti),
                    s_dev = ScoreSplit(corpus, kd.model, Split::kDev, si),
                    s_test = ScoreSplit(corpus, kd.model, Split::kTest, si),
                    n_test = ScoreSplit(corpus, nokd.model, Split::kTest, ni);
  SeedRun r;
  r.teacher_test = Accuracy(HitsAtK(t_test, k));
  r.kd_test = Accuracy(HitsAtK(s_test, k));
  r.nokd_test = Accuracy(HitsAtK(n_test, k));
  r.teacher_dev = Accuracy(HitsAtK(t_dev, k));
  r.kd_dev = Accuracy(HitsAtK(s_dev, k));
  const EnsembleTuning tuning = TuneEnsembleWeights(t_dev.table, s_dev.table, t_dev.gold, k);
  r.ens_dev = tuning.best_accuracy;
  r.ens_wa = tuning.best.w_a;
  r.ens_test = EnsembleTopKAccuracy(t_test.table, s_test.table, tuning.best, t_test.gold, k);

  // openSQA on the KD student's retrieval.
  auto candidates = [&](const ScoredSplit &s) {
    std::vector<std::vector<AnswerCandidate>> out;
    for (size_t i = 0; i < s.questions.size(); ++i) {
      SearchResult hits;
      hits.k = k;
      for (int p : TopKIndices(s.table.scores.Row(static_cast<int>(i)), k))
        hits.hits.push_back({s.table.passage_ids[p], s.table.scores(static_cast<int>(i), p)});
      out.push_back(ReadRetrieved(corpus, s.questions[i], hits));
      r.span_only_ranking = r.span_only_ranking && SpanOnlyRankingMatches(out.back());
    }
    return out;
  };
  const auto dev_c = candidates(s_dev), test_c = candidates(s_test);
  const AnswerTuning at = TuneAnswerWeights(corpus, s_dev.questions, dev_c);
  r.tuned_wr = at.best.w_r;
  r.ff1_tuned = MeanAnswerFf1(corpus, s_test.questions, test_c, at.best);
  r.ff1_span = MeanAnswerFf1(corpus, s_test.questions, test_c, {0.0, 1.0});

  log << Fmt("  seed %.0f: test top-k teacher %.3f kd %.3f nokd %.3f", seed, r.teacher_test, r.kd_test, r.nokd_test)
      << Fmt(" | ensemble w_a %.2f dev %.3f test %.3f", r.ens_wa, r.ens_dev, r.ens_test)
      << Fmt(" | ff1 tuned %.3f span-only %.3f (w_r %.2f)", r.ff1_tuned, r.ff1_span, r.tuned_wr)
      << Fmt(" | %.0fs\n", Seconds(start));
  return r;
}

struct JitterRun {
  std::vector<double> midpoints;
  std::vector<double> cascade_acc, student_acc;
  std::vector<int> n;
};

JitterRun RunJitterSeed(uint64_t seed, std::ostream &log) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig rc = DeskConfig(seed);
  rc.corpus.rate_min = 0.0;
  rc.corpus.rate_max = 0.8;
  const Corpus corpus = GenerateCorpus(rc.corpus);
  const int k = rc.k;
  TrainResult teacher = TrainTeacher(corpus, rc.model, rc.teacher);
  TrainResult kd = TrainStudent(corpus, &teacher.model, StudentModel(rc), rc.student);
  const ScoredSplit t = ScoreSplit(corpus, teacher.model, Split::kTest, BuildIndex(corpus, teacher.model));
  const ScoredSplit s = ScoreSplit(corpus, kd.model, Split::kTest, BuildIndex(corpus, kd.model));
  std::vector<double> wer;
  for (int q : t.questions) wer.push_back(WordErrorRate(corpus.questions[q].tokens, corpus.question_transcripts[q].tokens));
  const WerBucketReport report = MakeWerBucketReport(wer, {"cascade", "student"}, {HitsAtK(t, k), HitsAtK(s, k)});
  JitterRun out;
  for (const WerBucket &b : report.buckets) {
    if (b.n == 0) continue;
    out.midpoints.push_back(b.midpoint());
    out.cascade_acc.push_back(*b.accuracy[0]);
    out.student_acc.push_back(*b.accuracy[1]);
    out.n.push_back(b.n);
  }
  log << Fmt("  seed %.0f jittered (%.0fs):\n", seed, Seconds(start)) << FormatWerBucketTable(report);
  return out;
}

// ---------------------------------------------------------------------------
// 8. pipeline determinism

std::string Slurp(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string DropTimestamps(const std::string &text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line))
    if (line.find("\"started_at\"") == std::string::npos && line.find("\"finished_at\"") == std::string::npos)
      out += line + "\n";
  return out;
}

Outcome Criterion8() {
  const auto start = std::chrono::steady_clock::now();
  const fs::path work = fs::temp_directory_path() / "sparch-acceptance-pipeline";
  fs::remove_all(work);
  fs::create_directories(work);
  // Small enough to run twice in seconds; every subcommand still runs.
  const fs::path profile = work / "small.profile";
  std::ofstream(profile) << "inherit = " << (fs::path(SPARCH_SOURCE_DIR) / "configs" / "desk.profile").string() << "\n"
                         << "corpus.num_passages = 120\ncorpus.num_train = 40\ncorpus.num_dev = 20\n"
                         << "corpus.num_test = 20\ncorpus.num_passage_speakers = 12\n"
                         << "corpus.question_speakers_per_split = 6\n"
                         << "model.encoder.dim = 8\nmodel.encoder.num_layers = 1\nmodel.encoder.ffn_dim = 16\n"
                         << "model.tokens.dim = 8\nmodel.features.hidden_dim = 8\n"
                         << "teacher.batch_size = 8\nteacher.epochs = 2\nstudent.batch_size = 8\nstudent.epochs = 2\n";
  std::vector<fs::path> roots;
  for (int run = 0; run < 2; ++run) {
    const fs::path root = work / ("run" + std::to_string(run));
    roots.push_back(root);
    const std::string cmd = "SPARCH='" + std::string(SPARCH_BINARY) + "' SPARCH_CONFIG='" + profile.string() + "' '" +
                            SPARCH_SOURCE_DIR + "/scripts/run-pipeline.sh' --seed 7 --set paths.root='" +
                            root.string() + "' > '" + (work / ("log" + std::to_string(run))).string() + "' 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "pipeline run " + std::to_string(run) + " failed, see " + work.string()};
  }
  std::set<std::string> files[2];
  for (int run = 0; run < 2; ++run)
    for (const auto &e : fs::recursive_directory_iterator(roots[run]))
      if (e.is_regular_file()) files[run].insert(fs::relative(e.path(), roots[run]).string());
  int differing = 0, manifests = 0;
  std::string first_diff;
  if (files[0] != files[1]) {
    ++differing;
    first_diff = "file lists";
  }
  for (const std::string &f : files[0]) {
    if (!files[1].count(f)) continue;
    std::string a = Slurp(roots[0] / f), b = Slurp(roots[1] / f);
    if (f.ends_with("run.json")) {
      ++manifests;
      a = DropTimestamps(a);
      b = DropTimestamps(b);
    }
    if (a != b) {
      if (first_diff.empty()) first_diff = f;
      ++differing;
    }
  }
  const bool pass = differing == 0 && !files[0].empty();
  if (pass) fs::remove_all(work);
  return {pass, std::to_string(files[0].size()) + " files (" + std::to_string(manifests) + " manifests), " +
                    std::to_string(differing) + " differ" + (first_diff.empty() ? "" : " (first: " + first_diff + ")") +
                    Fmt(", %.1fs", Seconds(start))};
}

}  // namespace
}  // namespace sparch

int main(int argc, char **argv) {
  using namespace sparch;
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  int num_seeds = 3;
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  app.add_option("--seeds", num_seeds, "seeds for the training criteria")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  auto wanted = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };
  SetVerbosity(-1);

  std::map<int, Outcome> outcomes;
  auto run = [&](int c, const std::function<Outcome()> &f) {
    if (!wanted(c)) return;
    try {
      outcomes[c] = f();
    } catch (const std::exception &e) {
      outcomes[c] = {false, std::string("error: ") + e.what()};
    }
    std::cout << "criterion " << c << ": " << (outcomes[c].pass ? "PASS" : "FAIL") << "  " << outcomes[c].detail
              << std::endl;
  };
  run(1, Criterion1);
  run(2, Criterion2);
  run(3, Criterion3);
  run(4, Criterion4);

  std::vector<SeedRun> seeds;
  if (wanted(5) || wanted(6) || wanted(9)) {
    const auto start = std::chrono::steady_clock::now();
    std::cout << "training on the desk corpus, " << num_seeds << " seeds" << std::endl;
    try {
      for (int s = 0; s < num_seeds; ++s) seeds.push_back(RunDeskSeed(s, std::cout));
    } catch (const std::exception &e) {
      std::cout << "  training failed: " << e.what() << std::endl;
      seeds.clear();
    }
    const double secs = Seconds(start);
    const int majority = num_seeds / 2 + 1;
    run(5, [&] {
      int ok = 0;
      std::string d;
      for (const SeedRun &r : seeds) {
        const bool a = r.kd_test >= 0.8 * r.teacher_test, b = r.nokd_test < 0.25 * r.kd_test;
        ok += a && b;
        d += Fmt(" [kd/teacher %.2f, nokd/kd %.2f]", r.teacher_test > 0 ? r.kd_test / r.teacher_test : 0.0,
                 r.kd_test > 0 ? r.nokd_test / r.kd_test : INFINITY);
      }
      return Outcome{!seeds.empty() && ok >= majority && secs < 3600.0,
                     std::to_string(ok) + "/" + std::to_string(seeds.size()) + " seeds pass" + d +
                         Fmt(", training %.0fs", secs)};
    });
    run(6, [&] {
      int ok = 0;
      std::string d;
      for (const SeedRun &r : seeds) {
        const bool test = r.ens_test >= std::max(r.teacher_test, r.kd_test) - 0.005;
        const bool dev = r.ens_dev > std::max(r.teacher_dev, r.kd_dev);
        ok += test && dev;
        d += Fmt(" [test %+.3f, dev %+.3f]", r.ens_test - std::max(r.teacher_test, r.kd_test),
                 r.ens_dev - std::max(r.teacher_dev, r.kd_dev));
      }
      return Outcome{!seeds.empty() && ok == static_cast<int>(seeds.size()),
                     std::to_string(ok) + "/" + std::to_string(seeds.size()) + " seeds pass; ensemble minus best single" + d};
    });
  }

  if (wanted(7)) {
    run(7, [&] {
      std::cout << "training on the jittered corpus, " << num_seeds << " seeds" << std::endl;
      int ok = 0;
      std::string d;
      for (int s = 0; s < num_seeds; ++s) {
        const JitterRun j = RunJitterSeed(s, std::cout);
        double rho = NAN;
        try {
          rho = SpearmanCorrelation(j.midpoints, j.cascade_acc);
        } catch (const Error &) {
        }
        bool beats = true;
        int high = 0;
        for (size_t b = 0; b < j.midpoints.size(); ++b)
          if (j.midpoints[b] >= 0.45) {
            ++high;
            beats = beats && j.student_acc[b] > j.cascade_acc[b];
          }
        ok += rho < -0.5 && beats && high > 0;
        d += Fmt(" [rho %.2f, student wins ", rho) + (beats ? "all " : "not all ") +
             Fmt("%.0f high-WER buckets]", high);
      }
      return Outcome{ok > 0 && ok >= (2 * num_seeds + 2) / 3,
                     std::to_string(ok) + "/" + std::to_string(num_seeds) + " seeds pass" + d};
    });
  }

  run(8, Criterion8);

  if (wanted(9))
    run(9, [&] {
      int ok = 0;
      bool ranking = !seeds.empty();
      std::string d;
      for (const SeedRun &r : seeds) {
        ranking = ranking && r.span_only_ranking;
        ok += r.ff1_tuned >= r.ff1_span;
        d += Fmt(" [tuned %.3f vs span-only %.3f]", r.ff1_tuned, r.ff1_span);
      }
      const int need = (2 * static_cast<int>(seeds.size()) + 2) / 3;
      return Outcome{ranking && ok >= need,
                     std::string("(0,1) weights ") + (ranking ? "reproduce" : "do not reproduce") +
                         " span-only ranking; " + std::to_string(ok) + "/" + std::to_string(seeds.size()) +
                         " seeds tuned >= span-only" + d};
    });

  int failed = 0;
  for (const auto &[c, o] : outcomes) failed += !o.pass;
  std::cout << outcomes.size() - failed << "/" << outcomes.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
