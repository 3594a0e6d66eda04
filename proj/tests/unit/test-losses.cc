// tests/unit/test-losses.cc

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

#include <cmath>

#include "doctest.h"
#include "sparch/base/error.h"
#include "sparch/losses/losses.h"
#include "sparch/numerics/grad-check.h"
#include "test-util.h"

namespace sparch {
namespace {

using testing::RandomTensor;

double NaiveNll(const Matrix &q, const Matrix &p) {
  double total = 0.0;
  for (int i = 0; i < q.rows; ++i) {
    std::vector<double> s(p.rows);
    double mx = -INFINITY;
    for (int j = 0; j < p.rows; ++j) {
      s[j] = 0.0;
      for (int k = 0; k < q.cols; ++k) s[j] += q(i, k) * p(j, k);
      mx = std::max(mx, s[j]);
    }
    double z = 0.0;
    for (double v : s) z += std::exp(v - mx);
    total += -(s[i] - mx - std::log(z));
  }
  return total / q.rows;
}

TEST_CASE("similarity") {
  const double q[] = {1, 0}, p[] = {0, 1};
  CHECK(Similarity(q, p) == 0.0);
  const double a[] = {1, 2, 3};
  CHECK(Similarity(a, a) == 14.0);
  CHECK_THROWS_AS(Similarity(q, a), Error);
  Rng rng(1);
  Matrix x = RandomTensor({2, 32}, &rng).ToMatrix();
  double naive = 0.0;
  for (int k = 0; k < 32; ++k) naive += x(0, k) * x(1, k);
  CHECK(std::abs(Similarity(x.Row(0), x.Row(1)) - naive) < 1e-12);
}

TEST_CASE("nll in batch") {
  Tensor zeros = Tensor::Zeros({4, 3});
  CHECK(std::abs(NllInBatch(zeros, zeros).item() - std::log(4.0)) < 1e-12);
  Rng rng(2);
  Tensor one_q = RandomTensor({1, 3}, &rng), one_p = RandomTensor({1, 3}, &rng);
  CHECK(NllInBatch(one_q, one_p).item() == 0.0);
  Tensor q = RandomTensor({8, 5}, &rng), p = RandomTensor({8, 5}, &rng);
  CHECK(std::abs(NllInBatch(q, p).item() - NaiveNll(q.ToMatrix(), p.ToMatrix())) < 1e-10);
  CHECK(NllInBatch(q, p).item() >= 0.0);
  auto report = CheckGradients([&] { return NllInBatch(q, p); }, {{"q", q}, {"p", p}});
  CHECK(report.max_rel_error < 1e-6);

  Tensor bad = Tensor::FromData({2, 1}, {1.0, INFINITY});
  try {
    NllInBatch(bad, bad);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kNonFinite);
    CHECK(std::string(e.what()).find("row") != std::string::npos);
  }
}

TEST_CASE("total loss") {
  Rng rng(3);
  Batch student{RandomTensor({6, 4}, &rng), RandomTensor({6, 4}, &rng)};
  Batch teacher{RandomTensor({6, 4}, &rng, false), RandomTensor({6, 4}, &rng, false)};
  const double nll = NllInBatch(student.question_vecs, student.passage_vecs).item();
  CHECK(TotalLoss(student, std::nullopt, {0.0, 0.0}).total.item() == nll);
  CHECK(TotalLoss(student, teacher, {0.0, 0.0}).total.item() == nll);
  CHECK_THROWS_AS(TotalLoss(student, std::nullopt, {0.5, 0.0}), Error);
  CHECK_THROWS_AS(TotalLoss(student, Batch{student.question_vecs, teacher.passage_vecs}, {0.5, 0.5}),
                  Error);

  const Matrix sq = student.question_vecs.ToMatrix(), sp = student.passage_vecs.ToMatrix();
  const Matrix tq = teacher.question_vecs.ToMatrix(), tp = teacher.passage_vecs.ToMatrix();
  const double oracle = NaiveNll(sq, sp) + 0.5 * NaiveNll(sq, tp) + 0.5 * NaiveNll(tq, sp);
  LossTerms terms = TotalLoss(student, teacher, {0.5, 0.5});
  CHECK(std::abs(terms.total.item() - oracle) < 1e-10);

  Batch same{Tensor::FromMatrix(tq), Tensor::FromMatrix(tp)};
  CHECK(std::abs(TotalLoss(same, teacher, {0.5, 0.5}).total.item() - 2.0 * NaiveNll(tq, tp)) < 1e-12);

  double previous = -1.0;
  for (double w : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const double v = TotalLoss(student, teacher, {w, w}).total.item();
    CHECK(v >= previous);
    previous = v;
  }

  auto report = CheckGradients([&] { return TotalLoss(student, teacher, {0.5, 0.5}).total; },
                               {{"sq", student.question_vecs},
                                {"sp", student.passage_vecs},
                                {"tq", teacher.question_vecs},
                                {"tp", teacher.passage_vecs}});
  CHECK(report.max_rel_error < 1e-6);
  CHECK(report.tensors[2].max_abs_analytic == 0.0);
  CHECK(report.tensors[3].max_abs_analytic == 0.0);
}

}  // namespace
}  // namespace sparch
