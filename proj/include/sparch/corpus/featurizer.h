// sparch/corpus/featurizer.h

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

#ifndef SPARCH_CORPUS_FEATURIZER_H_
#define SPARCH_CORPUS_FEATURIZER_H_

#include <cstdint>
#include <span>

#include "sparch/base/matrix.h"

namespace sparch {

/// Synthetic frame-level "speech": every token is rendered as
/// frames_per_token noisy copies of a fixed per-token prototype vector.
struct FeaturizerConfig {
  int frames_per_token = 12;
  int feature_dim = 16;
  Matrix token_prototypes;  // vocab_size x feature_dim
  double noise_std = 0.5;
  uint64_t seed = 0;
};

/// Draws N(0,1) prototypes for every token id from `seed`.
FeaturizerConfig MakeFeaturizer(int vocab_size, int frames_per_token, int feature_dim,
                                double noise_std, uint64_t seed);

/// Noise seed for one utterance; differs across speakers for the same text.
uint64_t UtteranceSeed(const FeaturizerConfig &config, int speaker, int utterance_index);

/// frames_per_token * tokens.size() frames, each prototype + N(0, noise_std^2).
FrameSequence Featurize(std::span<const int> tokens, const FeaturizerConfig &config,
                        uint64_t utterance_seed);

}  // namespace sparch

#endif  // SPARCH_CORPUS_FEATURIZER_H_
