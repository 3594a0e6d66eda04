// encoders/token-embedder.cc

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

#include "sparch/encoders/token-embedder.h"

#include "sparch/base/error.h"
#include "sparch/numerics/ops.h"

namespace sparch {

TokenEmbedder::TokenEmbedder(const TokenEmbedderConfig &config, const std::string &prefix, Rng *rng)
    : config_(config) {
  if (config.vocab_size < 2 || config.dim < 1)
    SPARCH_ERR(kConfig) << "token embedder needs vocab_size >= 2 and dim >= 1";
  if (config.unk_id < 0 || config.unk_id >= config.vocab_size)
    SPARCH_ERR(kConfig) << "unk id " << config.unk_id << " outside vocabulary";
  std::vector<double> table(static_cast<size_t>(config.vocab_size) * config.dim);
  for (double &v : table) v = rng->Normal(0.0, config.init_std);
  table_ = Parameter(prefix + ".embeddings",
                     Tensor::FromData({config.vocab_size, config.dim}, std::move(table)));
}

int TokenEmbedder::MapToken(int id) const {
  return id >= 0 && id < config_.vocab_size ? id : config_.unk_id;
}

Tensor TokenEmbedder::Embed(std::span<const int> tokens) const {
  if (tokens.empty()) SPARCH_ERR(kEmptyInput) << "cannot embed an empty token list";
  std::vector<int> ids(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) ids[i] = MapToken(tokens[i]);
  return EmbeddingLookup(table_.tensor(), ids);
}

}  // namespace sparch
