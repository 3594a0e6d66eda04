// sparch/encoders/sentence-encoder.h

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

#ifndef SPARCH_ENCODERS_SENTENCE_ENCODER_H_
#define SPARCH_ENCODERS_SENTENCE_ENCODER_H_

#include <optional>
#include <string>
#include <vector>

#include "sparch/base/random.h"
#include "sparch/numerics/attention.h"
#include "sparch/numerics/tensor.h"

namespace sparch {

struct SentenceEncoderConfig {
  int input_dim = 32;
  int dim = 32;
  int num_layers = 2;
  int num_heads = 2;
  int ffn_dim = 64;
  int max_positions = 256;
  bool position_embeddings = true;
  /// LayerNorm on the CLS output of a non-empty stack.
  bool final_layer_norm = true;
  /// Std-dev of the CLS and position embeddings at init.
  double embedding_init_std = 0.1;
};

/// Prepends a learned CLS vector to the (projected) input rows, adds
/// absolute position embeddings, runs the attention stack and returns the
/// CLS row as the sentence vector.
class SentenceEncoder {
 public:
  SentenceEncoder() = default;
  SentenceEncoder(const SentenceEncoderConfig &config, double init_scale,
                  const std::string &prefix, Rng *rng);

  /// seq: [T x input_dim] -> vector of length dim. Throws kLength when
  /// T + 1 exceeds max_positions.
  Tensor Encode(const Tensor &seq) const;

  const SentenceEncoderConfig &config() const { return config_; }
  std::vector<AttentionBlockParams> &layers() { return layers_; }
  Parameter &cls_embedding() { return cls_; }
  Parameter &position_embeddings() { return positions_; }
  std::vector<Parameter *> Parameters();
  std::vector<const Parameter *> Parameters() const;

 private:
  SentenceEncoderConfig config_;
  std::optional<Parameter> proj_weight_, proj_bias_;
  std::optional<Parameter> final_gamma_, final_beta_;
  Parameter cls_;
  Parameter positions_;
  std::vector<AttentionBlockParams> layers_;
};

}  // namespace sparch

#endif  // SPARCH_ENCODERS_SENTENCE_ENCODER_H_
