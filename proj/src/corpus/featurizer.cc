// corpus/featurizer.cc

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

#include "sparch/corpus/featurizer.h"

#include "sparch/base/error.h"
#include "sparch/base/hash.h"
#include "sparch/base/random.h"

namespace sparch {

FeaturizerConfig MakeFeaturizer(int vocab_size, int frames_per_token, int feature_dim,
                                double noise_std, uint64_t seed) {
  if (vocab_size < 2 || frames_per_token < 1 || feature_dim < 1 || noise_std < 0.0)
    SPARCH_ERR(kConfig) << "invalid featurizer settings";
  FeaturizerConfig config;
  config.frames_per_token = frames_per_token;
  config.feature_dim = feature_dim;
  config.noise_std = noise_std;
  config.seed = seed;
  config.token_prototypes = Matrix(vocab_size, feature_dim);
  Rng rng(seed);
  for (double &v : config.token_prototypes.data) v = rng.Normal();
  return config;
}

uint64_t UtteranceSeed(const FeaturizerConfig &config, int speaker, int utterance_index) {
  return MixSeed(MixSeed(config.seed, 0x5eed0000ull + static_cast<uint64_t>(speaker)),
                 static_cast<uint64_t>(utterance_index));
}

FrameSequence Featurize(std::span<const int> tokens, const FeaturizerConfig &config,
                        uint64_t utterance_seed) {
  if (tokens.empty()) SPARCH_ERR(kEmptyInput) << "cannot featurize an empty token list";
  const Matrix &protos = config.token_prototypes;
  if (protos.cols != config.feature_dim) SPARCH_ERR(kConfig) << "prototype width mismatch";
  FrameSequence frames(static_cast<int>(tokens.size()) * config.frames_per_token, config.feature_dim);
  Rng rng(utterance_seed);
  int row = 0;
  for (int token : tokens) {
    if (token < 0 || token >= protos.rows)
      SPARCH_ERR(kDimension) << "token " << token << " has no prototype";
    for (int f = 0; f < config.frames_per_token; ++f, ++row) {
      for (int c = 0; c < config.feature_dim; ++c) {
        const double noise = config.noise_std > 0.0 ? rng.Normal(0.0, config.noise_std) : 0.0;
        frames(row, c) = protos(token, c) + noise;
      }
    }
  }
  return frames;
}

}  // namespace sparch
