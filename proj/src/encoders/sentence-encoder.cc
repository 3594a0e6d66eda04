// encoders/sentence-encoder.cc

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

#include "sparch/encoders/sentence-encoder.h"

#include <cmath>

#include "sparch/base/error.h"
#include "sparch/numerics/ops.h"

namespace sparch {

SentenceEncoder::SentenceEncoder(const SentenceEncoderConfig &config, double init_scale,
                                 const std::string &prefix, Rng *rng)
    : config_(config) {
  if (config.dim < 1 || config.input_dim < 1 || config.max_positions < 2 || config.num_layers < 0)
    SPARCH_ERR(kConfig) << "invalid sentence encoder configuration";
  if (config.input_dim != config.dim) {
    std::vector<double> w(static_cast<size_t>(config.input_dim) * config.dim);
    const double stddev = init_scale / std::sqrt(static_cast<double>(config.input_dim));
    for (double &v : w) v = rng->Normal(0.0, stddev);
    proj_weight_ = Parameter(prefix + ".proj.weight",
                             Tensor::FromData({config.input_dim, config.dim}, std::move(w)));
    proj_bias_ = Parameter(prefix + ".proj.bias", Tensor::Zeros({config.dim}));
  }
  std::vector<double> cls(config.dim);
  for (double &v : cls) v = rng->Normal(0.0, config.embedding_init_std);
  cls_ = Parameter(prefix + ".cls", Tensor::FromData({config.dim}, std::move(cls)));
  std::vector<double> pos(static_cast<size_t>(config.max_positions) * config.dim);
  for (double &v : pos) v = rng->Normal(0.0, config.embedding_init_std);
  positions_ = Parameter(prefix + ".positions",
                         Tensor::FromData({config.max_positions, config.dim}, std::move(pos)));
  for (int l = 0; l < config.num_layers; ++l)
    layers_.push_back(InitAttentionBlock(config.dim, config.num_heads, config.ffn_dim, init_scale,
                                         prefix + ".layer" + std::to_string(l), rng));
  if (config.final_layer_norm && config.num_layers > 0) {
    final_gamma_ = Parameter(prefix + ".final_norm.gamma",
                             Tensor::FromData({config.dim}, std::vector<double>(config.dim, 1.0)));
    final_beta_ = Parameter(prefix + ".final_norm.beta", Tensor::Zeros({config.dim}));
  }
}

Tensor SentenceEncoder::Encode(const Tensor &seq) const {
  if (seq.rank() != 2 || seq.cols() != config_.input_dim)
    SPARCH_ERR(kDimension) << "sentence encoder expects [T x " << config_.input_dim << "], got "
                           << ShapeString(seq.shape());
  const int length = seq.rows() + 1;
  if (length > config_.max_positions)
    SPARCH_ERR(kLength) << "sequence of " << seq.rows() << " rows plus CLS exceeds "
                        << config_.max_positions << " positions";
  Tensor x = seq;
  if (proj_weight_) x = AddBias(MatMul(x, proj_weight_->tensor()), proj_bias_->tensor());
  const Tensor parts[] = {cls_.tensor(), x};
  x = ConcatRows(parts);
  if (config_.position_embeddings) x = Add(x, SliceRows(positions_.tensor(), 0, length));
  for (const AttentionBlockParams &layer : layers_) x = SelfAttentionBlock(x, layer);
  Tensor out = SelectRow(x, 0);
  if (final_gamma_) out = LayerNorm(out, final_gamma_->tensor(), final_beta_->tensor(), 1e-5);
  return out;
}

std::vector<Parameter *> SentenceEncoder::Parameters() {
  std::vector<Parameter *> out;
  if (proj_weight_) {
    out.push_back(&*proj_weight_);
    out.push_back(&*proj_bias_);
  }
  out.push_back(&cls_);
  out.push_back(&positions_);
  for (AttentionBlockParams &layer : layers_)
    for (Parameter *p : layer.Parameters()) out.push_back(p);
  if (final_gamma_) {
    out.push_back(&*final_gamma_);
    out.push_back(&*final_beta_);
  }
  return out;
}

std::vector<const Parameter *> SentenceEncoder::Parameters() const {
  std::vector<const Parameter *> out;
  if (proj_weight_) {
    out.push_back(&*proj_weight_);
    out.push_back(&*proj_bias_);
  }
  out.push_back(&cls_);
  out.push_back(&positions_);
  for (const AttentionBlockParams &layer : layers_)
    for (const Parameter *p : layer.Parameters()) out.push_back(p);
  if (final_gamma_) {
    out.push_back(&*final_gamma_);
    out.push_back(&*final_beta_);
  }
  return out;
}

}  // namespace sparch
