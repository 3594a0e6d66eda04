// numerics/attention.cc

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

#include "sparch/numerics/attention.h"

#include <cmath>

#include "sparch/base/error.h"
#include "sparch/numerics/ops.h"

namespace sparch {

namespace {

Parameter RandomMatrix(const std::string &name, int rows, int cols, double scale, Rng *rng) {
  std::vector<double> data(static_cast<size_t>(rows) * cols);
  const double stddev = scale / std::sqrt(static_cast<double>(rows));
  for (double &v : data) v = rng->Normal(0.0, stddev);
  return Parameter(name, Tensor::FromData({rows, cols}, std::move(data)));
}

Parameter Constant(const std::string &name, int n, double value) {
  return Parameter(name, Tensor::FromData({n}, std::vector<double>(n, value)));
}

}  // namespace

std::vector<Parameter *> AttentionBlockParams::Parameters() {
  return {&ln1_gamma, &ln1_beta, &qkv_weight, &qkv_bias, &out_weight, &out_bias,
          &ln2_gamma, &ln2_beta, &ff1_weight, &ff1_bias, &ff2_weight, &ff2_bias};
}

std::vector<const Parameter *> AttentionBlockParams::Parameters() const {
  return {&ln1_gamma, &ln1_beta, &qkv_weight, &qkv_bias, &out_weight, &out_bias,
          &ln2_gamma, &ln2_beta, &ff1_weight, &ff1_bias, &ff2_weight, &ff2_bias};
}

AttentionBlockParams InitAttentionBlock(int dim, int num_heads, int ffn_dim, double init_scale,
                                        const std::string &prefix, Rng *rng) {
  if (num_heads < 1 || dim % num_heads != 0)
    SPARCH_ERR(kConfig) << "model dim " << dim << " is not divisible by " << num_heads << " heads";
  AttentionBlockParams p;
  p.num_heads = num_heads;
  p.ln1_gamma = Constant(prefix + ".ln1.gamma", dim, 1.0);
  p.ln1_beta = Constant(prefix + ".ln1.beta", dim, 0.0);
  p.qkv_weight = RandomMatrix(prefix + ".attn.qkv.weight", dim, 3 * dim, init_scale, rng);
  p.qkv_bias = Constant(prefix + ".attn.qkv.bias", 3 * dim, 0.0);
  p.out_weight = RandomMatrix(prefix + ".attn.out.weight", dim, dim, init_scale, rng);
  p.out_bias = Constant(prefix + ".attn.out.bias", dim, 0.0);
  p.ln2_gamma = Constant(prefix + ".ln2.gamma", dim, 1.0);
  p.ln2_beta = Constant(prefix + ".ln2.beta", dim, 0.0);
  p.ff1_weight = RandomMatrix(prefix + ".ffn.w1", dim, ffn_dim, init_scale, rng);
  p.ff1_bias = Constant(prefix + ".ffn.b1", ffn_dim, 0.0);
  p.ff2_weight = RandomMatrix(prefix + ".ffn.w2", ffn_dim, dim, init_scale, rng);
  p.ff2_bias = Constant(prefix + ".ffn.b2", dim, 0.0);
  return p;
}

Tensor SelfAttentionBlock(const Tensor &x, const AttentionBlockParams &p, AttentionTrace *trace) {
  const int d = x.cols();
  if (p.dim() != d)
    SPARCH_ERR(kDimension) << "attention block of width " << p.dim() << " applied to width " << d;
  if (p.num_heads < 1 || d % p.num_heads != 0)
    SPARCH_ERR(kConfig) << "model dim " << d << " is not divisible by " << p.num_heads << " heads";
  const int head_dim = d / p.num_heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));

  Tensor normed = LayerNorm(x, p.ln1_gamma.tensor(), p.ln1_beta.tensor(), p.layer_norm_eps);
  Tensor qkv = AddBias(MatMul(normed, p.qkv_weight.tensor()), p.qkv_bias.tensor());
  std::vector<Tensor> heads;
  heads.reserve(p.num_heads);
  if (trace) trace->head_weights.clear();
  for (int h = 0; h < p.num_heads; ++h) {
    Tensor q = SliceCols(qkv, h * head_dim, head_dim);
    Tensor k = SliceCols(qkv, d + h * head_dim, head_dim);
    Tensor v = SliceCols(qkv, 2 * d + h * head_dim, head_dim);
    Tensor weights = Softmax(Scale(MatMulTransposed(q, k), inv_sqrt));
    if (trace) trace->head_weights.push_back(weights.ToMatrix());
    heads.push_back(MatMul(weights, v));
  }
  Tensor attended = p.num_heads == 1 ? heads[0] : ConcatCols(heads);
  Tensor h = Add(x, AddBias(MatMul(attended, p.out_weight.tensor()), p.out_bias.tensor()));

  Tensor normed2 = LayerNorm(h, p.ln2_gamma.tensor(), p.ln2_beta.tensor(), p.layer_norm_eps);
  Tensor hidden = Gelu(AddBias(MatMul(normed2, p.ff1_weight.tensor()), p.ff1_bias.tensor()));
  return Add(h, AddBias(MatMul(hidden, p.ff2_weight.tensor()), p.ff2_bias.tensor()));
}

}  // namespace sparch
