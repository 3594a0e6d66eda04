// tests/unit/test-util.h

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

#ifndef SPARCH_TESTS_TEST_UTIL_H_
#define SPARCH_TESTS_TEST_UTIL_H_

#include <vector>

#include "sparch/base/random.h"
#include "sparch/corpus/corpus.h"
#include "sparch/encoders/retriever-model.h"
#include "sparch/numerics/ops.h"
#include "sparch/numerics/tensor.h"

namespace sparch::testing {

inline Tensor RandomTensor(const Shape &shape, Rng *rng, bool requires_grad = true,
                           double scale = 1.0) {
  std::vector<double> v(ShapeSize(shape));
  for (double &x : v) x = rng->Normal(0.0, scale);
  return Tensor::FromData(shape, std::move(v), requires_grad);
}

// Generic scalar readout: sum(y * r) for a fixed random r.
inline Tensor Readout(const Tensor &y, const Tensor &r) { return Sum(Mul(y, r)); }

// A corpus small enough to train on in well under a second.
inline CorpusConfig TinyCorpusConfig(uint64_t seed = 0) {
  CorpusConfig c;
  c.seed = seed;
  c.num_passages = 40;
  c.passages_per_document = 4;
  c.num_train = 12;
  c.num_dev = 6;
  c.num_test = 6;
  c.num_function_words = 6;
  c.num_topics = 4;
  c.words_per_topic = 6;
  c.num_entities = 30;
  c.entities_per_passage = 3;
  c.passage_length = 12;
  c.question_length = 8;
  c.entity_cues = 1;
  c.topic_cues = 2;
  c.num_passage_speakers = 6;
  c.question_speakers_per_split = 3;
  c.feature_dim = 4;
  return c;
}

inline RetrieverConfig TinyRetrieverConfig(InputKind input, int vocab_size, int feature_dim) {
  RetrieverConfig m;
  m.input = input;
  m.encoder.dim = 8;
  m.encoder.num_layers = 1;
  m.encoder.num_heads = 2;
  m.encoder.ffn_dim = 16;
  m.encoder.max_positions = 64;
  m.tokens.dim = 8;
  m.tokens.vocab_size = vocab_size;
  m.features.hidden_dim = 8;
  m.features.input_dim = feature_dim;
  return m;
}

}  // namespace sparch::testing

#endif  // SPARCH_TESTS_TEST_UTIL_H_
