// sparch/encoders/token-embedder.h

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

#ifndef SPARCH_ENCODERS_TOKEN_EMBEDDER_H_
#define SPARCH_ENCODERS_TOKEN_EMBEDDER_H_

#include <span>
#include <string>
#include <vector>

#include "sparch/base/random.h"
#include "sparch/numerics/tensor.h"

namespace sparch {

struct TokenEmbedderConfig {
  int vocab_size = 2;
  int dim = 32;
  int unk_id = 0;
  double init_std = 1.0;
};

class TokenEmbedder {
 public:
  TokenEmbedder() = default;
  TokenEmbedder(const TokenEmbedderConfig &config, const std::string &prefix, Rng *rng);

  /// Ids outside [0, vocab_size) map to unk_id.
  int MapToken(int id) const;
  /// [n x dim]; throws kEmptyInput for an empty token list.
  Tensor Embed(std::span<const int> tokens) const;

  const TokenEmbedderConfig &config() const { return config_; }
  std::vector<Parameter *> Parameters() { return {&table_}; }
  std::vector<const Parameter *> Parameters() const { return {&table_}; }

 private:
  TokenEmbedderConfig config_;
  Parameter table_;
};

}  // namespace sparch

#endif  // SPARCH_ENCODERS_TOKEN_EMBEDDER_H_
