// tests/unit/test-numerics.cc

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
#include <numeric>

#include "doctest.h"
#include "sparch/base/error.h"
#include "sparch/numerics/attention.h"
#include "sparch/numerics/grad-check.h"
#include "sparch/numerics/ops.h"
#include "test-util.h"

namespace sparch {
namespace {

using testing::RandomTensor;
using testing::Readout;

Tensor Mat(int r, int c, std::vector<double> v, bool grad = false) {
  return Tensor::FromData({r, c}, std::move(v), grad);
}

TEST_CASE("matmul small cases") {
  Tensor eye = Mat(2, 2, {1, 0, 0, 1});
  CHECK(MatMul(eye, eye).ToMatrix() == eye.ToMatrix());
  Tensor y = MatMul(Mat(2, 2, {1, 2, 3, 4}), Mat(2, 1, {1, 1}));
  CHECK(y.shape() == Shape{2, 1});
  CHECK(y.data()[0] == 3.0);
  CHECK(y.data()[1] == 7.0);
  CHECK_THROWS_AS(MatMul(Mat(2, 3, std::vector<double>(6)), Mat(2, 2, std::vector<double>(4))), Error);
}

TEST_CASE("matmul gradient") {
  Rng rng(11);
  Tensor a = RandomTensor({5, 4}, &rng), b = RandomTensor({4, 3}, &rng);
  Tensor r = RandomTensor({5, 3}, &rng, false);
  auto report = CheckGradients([&] { return Readout(MatMul(a, b), r); }, {{"a", a}, {"b", b}});
  CHECK(report.finite);
  CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("softmax") {
  Tensor s = Softmax(Tensor::FromData({2}, {0, 0}));
  CHECK(s.data()[0] == doctest::Approx(0.5));
  Tensor big = Softmax(Tensor::FromData({3}, {1000, 1000, 1000}));
  for (double v : big.data()) CHECK(std::abs(v - 1.0 / 3.0) < 1e-15);
  CHECK_THROWS_AS(Softmax(Tensor::Zeros({1, 0})), Error);

  Rng rng(3);
  Tensor x = RandomTensor({7}, &rng);
  Tensor shifted = Tensor::FromData({7}, std::vector<double>(x.data().begin(), x.data().end()));
  for (double &v : shifted.mutable_data()) v += 123.25;
  Tensor p = Softmax(x), q = Softmax(shifted);
  double sum = 0.0;
  for (size_t i = 0; i < 7; ++i) {
    sum += p.data()[i];
    CHECK(p.data()[i] > 0.0);
    CHECK(std::abs(p.data()[i] - q.data()[i]) / p.data()[i] < 1e-12);
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);

  Tensor r = RandomTensor({7}, &rng, false);
  auto report = CheckGradients([&] { return Readout(Softmax(x), r); }, {{"x", x}});
  CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("instance norm") {
  Tensor c = InstanceNorm(Mat(3, 1, {2, 2, 2}), 1e-5);
  for (double v : c.data()) CHECK(v == 0.0);
  Tensor two = InstanceNorm(Mat(2, 1, {1, 3}), 0.0);
  CHECK(two.data()[0] == doctest::Approx(-1.0));
  CHECK(two.data()[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(InstanceNorm(Tensor::Zeros({0, 4}), 1e-5), Error);

  Rng rng(5);
  Tensor x = RandomTensor({16, 8}, &rng, true, 3.0);
  Matrix y = InstanceNorm(x, 1e-5).ToMatrix();
  for (int d = 0; d < 8; ++d) {
    double mean = 0.0, var = 0.0;
    for (int t = 0; t < 16; ++t) mean += y(t, d) / 16;
    for (int t = 0; t < 16; ++t) var += (y(t, d) - mean) * (y(t, d) - mean) / 16;
    CHECK(std::abs(mean) < 1e-10);
    CHECK(std::abs(var - 1.0) < 1e-5);
  }
  Tensor r = RandomTensor({16, 8}, &rng, false);
  auto report = CheckGradients([&] { return Readout(InstanceNorm(x, 1e-5), r); }, {{"x", x}});
  CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("conv1d") {
  Tensor x = Mat(5, 1, {1, 2, 3, 4, 5});
  Tensor id = Tensor::FromData({1, 1, 1}, {1.0});
  CHECK(Conv1d(x, id, 1).ToMatrix() == x.ToMatrix());
  Tensor avg = Tensor::FromData({2, 1, 1}, {0.5, 0.5});
  Tensor y = Conv1d(x, avg, 2);
  REQUIRE(y.rows() == 2);
  CHECK(y.data()[0] == 1.5);
  CHECK(y.data()[1] == 3.5);
  CHECK(Conv1dOutputLength(120, 4, 4) == 30);
  CHECK(Conv1dOutputLength(30, 3, 3) == 10);
  CHECK_THROWS_AS(Conv1d(Mat(1, 1, {1}), avg, 1), Error);
  for (int t = 1; t < 40; ++t)
    for (int k = 1; k <= t; ++k)
      for (int s = 1; s < 6; ++s) CHECK(Conv1dOutputLength(t, k, s) == (t - k) / s + 1);

  Rng rng(9);
  Tensor in = RandomTensor({13, 3}, &rng), kernel = RandomTensor({4, 3, 2}, &rng);
  Tensor r = RandomTensor({4, 2}, &rng, false);
  auto report =
      CheckGradients([&] { return Readout(Conv1d(in, kernel, 3), r); }, {{"x", in}, {"k", kernel}});
  CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("elementwise and structural op gradients") {
  Rng rng(21);
  Tensor a = RandomTensor({3, 4}, &rng), b = RandomTensor({3, 4}, &rng);
  Tensor bias = RandomTensor({4}, &rng), g = RandomTensor({4}, &rng);
  Tensor r = RandomTensor({3, 4}, &rng, false);
  std::vector<NamedTensor> ab = {{"a", a}, {"b", b}};
  CHECK(CheckGradients([&] { return Readout(Add(a, b), r); }, ab).max_rel_error < 1e-6);
  CHECK(CheckGradients([&] { return Readout(Sub(a, b), r); }, ab).max_rel_error < 1e-6);
  CHECK(CheckGradients([&] { return Readout(Mul(a, b), r); }, ab).max_rel_error < 1e-6);
  CHECK(CheckGradients([&] { return Readout(Gelu(a), r); }, {{"a", a}}).max_rel_error < 1e-6);
  CHECK(CheckGradients([&] { return Readout(AddBias(a, bias), r); }, {{"a", a}, {"bias", bias}})
            .max_rel_error < 1e-6);
  CHECK(CheckGradients([&] { return Readout(LayerNorm(a, g, bias, 1e-5), r); },
                       {{"a", a}, {"g", g}, {"bias", bias}})
            .max_rel_error < 1e-6);
  Tensor parts[] = {a, b};
  Tensor r2 = RandomTensor({6, 4}, &rng, false), r3 = RandomTensor({3, 8}, &rng, false);
  CHECK(CheckGradients([&] { return Readout(ConcatRows(parts), r2); }, ab).max_rel_error < 1e-6);
  CHECK(CheckGradients([&] { return Readout(ConcatCols(parts), r3); }, ab).max_rel_error < 1e-6);
  Tensor r4 = RandomTensor({2, 2}, &rng, false);
  CHECK(CheckGradients([&] { return Readout(SliceCols(SliceRows(a, 1, 2), 1, 2), r4); }, {{"a", a}})
            .max_rel_error < 1e-6);
  CHECK(CheckGradients([&] { return Dot(SelectRow(a, 2), bias); }, {{"a", a}, {"bias", bias}})
            .max_rel_error < 1e-6);
  Tensor table = RandomTensor({5, 4}, &rng);
  const int ids[] = {1, 3, 1};
  CHECK(CheckGradients([&] { return Readout(EmbeddingLookup(table, ids), r); }, {{"t", table}})
            .max_rel_error < 1e-6);
  const int targets[] = {0, 3, 2};
  CHECK(CheckGradients([&] { return CrossEntropyRows(a, targets); }, {{"a", a}}).max_rel_error < 1e-6);
  CHECK(CheckGradients([&] { return Scale(Sum(MatMulTransposed(a, b)), 0.5); }, ab).max_rel_error <
        1e-6);
}

TEST_CASE("grad check reports") {
  Tensor x = Tensor::Scalar(3.0);
  x.set_requires_grad(true);
  auto report = CheckGradients([&] { return Mul(x, x); }, {{"x", x}});
  CHECK(x.grad()[0] == 6.0);
  CHECK(report.max_rel_error < 1e-9);

  Tensor frozen = Tensor::Scalar(2.0);
  auto with_frozen = CheckGradients([&] { return Mul(x, frozen); }, {{"x", x}, {"frozen", frozen}});
  REQUIRE(with_frozen.tensors.size() == 2);
  CHECK_FALSE(with_frozen.tensors[1].requires_grad);
  CHECK(with_frozen.tensors[1].max_abs_analytic == 0.0);

  Tensor logits = Tensor::FromData({1, 2}, {NAN, 0.0}, true);
  const int t[] = {0};
  auto bad = CheckGradients([&] { return CrossEntropyRows(logits, t); }, {{"l", logits}});
  CHECK_FALSE(bad.finite);
  CHECK(bad.failing_op.find("cross_entropy") != std::string::npos);
}

TEST_CASE("graph is released after backward") {
  Tensor a = Tensor::FromData({2}, {1, 2}, true);
  Tensor y = Sum(Mul(a, a));
  y.Backward();
  CHECK(y.node()->inputs.empty());
  CHECK(a.grad()[1] == 4.0);
  {
    NoGradGuard guard;
    Tensor z = Mul(a, a);
    CHECK_FALSE(z.requires_grad());
  }
}

AttentionBlockParams SmallBlock(int dim, int heads, uint64_t seed) {
  Rng rng(seed);
  auto p = InitAttentionBlock(dim, heads, 2 * dim, 1.0, "blk", &rng);
  for (Parameter *q : p.Parameters())
    for (double &v : q->tensor().mutable_data()) v += rng.Normal(0.0, 0.1);
  return p;
}

TEST_CASE("attention block") {
  Rng rng(2);
  Tensor one = RandomTensor({1, 8}, &rng, false);
  AttentionBlockParams p = SmallBlock(8, 2, 4);
  AttentionTrace trace;
  SelfAttentionBlock(one, p, &trace);
  REQUIRE(trace.head_weights.size() == 2);
  for (const Matrix &w : trace.head_weights) CHECK(w.data == std::vector<double>{1.0});

  CHECK_THROWS_AS(InitAttentionBlock(8, 3, 16, 1.0, "x", &rng), Error);

  // Zeroed value/output projections leave only the feed-forward path.
  Tensor x = RandomTensor({4, 8}, &rng, false);
  AttentionBlockParams ablated = SmallBlock(8, 2, 6);
  auto qkv = ablated.qkv_weight.tensor().mutable_data();
  for (int r = 0; r < 8; ++r)
    for (int c = 16; c < 24; ++c) qkv[r * 24 + c] = 0.0;
  for (int c = 16; c < 24; ++c) ablated.qkv_bias.tensor().mutable_data()[c] = 0.0;
  for (double &v : ablated.out_weight.tensor().mutable_data()) v = 0.0;
  for (double &v : ablated.out_bias.tensor().mutable_data()) v = 0.0;
  Tensor h = LayerNorm(x, ablated.ln2_gamma.tensor(), ablated.ln2_beta.tensor(), 1e-5);
  Tensor ff = AddBias(MatMul(Gelu(AddBias(MatMul(h, ablated.ff1_weight.tensor()),
                                          ablated.ff1_bias.tensor())),
                             ablated.ff2_weight.tensor()),
                      ablated.ff2_bias.tensor());
  Matrix expected = Add(x, ff).ToMatrix();
  Matrix got = SelfAttentionBlock(x, ablated).ToMatrix();
  for (size_t i = 0; i < got.data.size(); ++i) CHECK(got.data[i] == doctest::Approx(expected.data[i]).epsilon(1e-12));
}

TEST_CASE("attention block gradients over seeds") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(100 + seed);
    AttentionBlockParams p = SmallBlock(8, 2, seed);
    Tensor x = RandomTensor({4, 8}, &rng);
    Tensor r = RandomTensor({4, 8}, &rng, false);
    auto inputs = ToNamedTensors(p.Parameters());
    inputs.push_back({"x", x});
    auto report = CheckGradients([&] { return Readout(SelfAttentionBlock(x, p), r); }, inputs);
    CHECK(report.finite);
    CHECK(report.max_rel_error < 1e-5);
  }
}

}  // namespace
}  // namespace sparch
