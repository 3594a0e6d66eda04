// sparch/numerics/attention.h

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

#ifndef SPARCH_NUMERICS_ATTENTION_H_
#define SPARCH_NUMERICS_ATTENTION_H_

#include <string>
#include <vector>

#include "sparch/base/random.h"
#include "sparch/numerics/tensor.h"

namespace sparch {

/// Weights of one pre-norm transformer block:
///   h   = x + W_o * MHA(LN1(x))
///   out = h + FFN(LN2(h)),  FFN(z) = W_2 gelu(W_1 z + b_1) + b_2
/// qkv_weight packs the query, key and value projections as [d x 3d]
/// column blocks, in that order.
struct AttentionBlockParams {
  int num_heads = 1;
  double layer_norm_eps = 1e-5;
  Parameter ln1_gamma, ln1_beta;
  Parameter qkv_weight, qkv_bias;
  Parameter out_weight, out_bias;
  Parameter ln2_gamma, ln2_beta;
  Parameter ff1_weight, ff1_bias;
  Parameter ff2_weight, ff2_bias;

  int dim() const { return out_weight.tensor().dim(0); }
  std::vector<Parameter *> Parameters();
  std::vector<const Parameter *> Parameters() const;
};

/// Random init: weights ~ N(0, init_scale^2 / fan_in), biases zero,
/// layer-norm gains one. Throws a config error if dim % num_heads != 0.
AttentionBlockParams InitAttentionBlock(int dim, int num_heads, int ffn_dim, double init_scale,
                                        const std::string &prefix, Rng *rng);

/// Filled with one [T x T] attention matrix per head when requested.
struct AttentionTrace {
  std::vector<Matrix> head_weights;
};

Tensor SelfAttentionBlock(const Tensor &x, const AttentionBlockParams &params,
                          AttentionTrace *trace = nullptr);

}  // namespace sparch

#endif  // SPARCH_NUMERICS_ATTENTION_H_
