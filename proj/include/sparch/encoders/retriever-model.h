// sparch/encoders/retriever-model.h

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

#ifndef SPARCH_ENCODERS_RETRIEVER_MODEL_H_
#define SPARCH_ENCODERS_RETRIEVER_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparch/base/matrix.h"
#include "sparch/encoders/feature-processor.h"
#include "sparch/encoders/sentence-encoder.h"
#include "sparch/encoders/token-embedder.h"

namespace sparch {

enum class InputKind { kTokens, kFrames };

const char *InputKindName(InputKind kind);
InputKind ParseInputKind(std::string_view name);

struct RetrieverConfig {
  InputKind input = InputKind::kFrames;
  FeatureProcessorConfig features;
  TokenEmbedderConfig tokens;
  SentenceEncoderConfig encoder;
  double init_scale = 1.0;
  /// Start both towers from the same random draw. They remain separate
  /// parameters; only their initial values coincide.
  bool tied_init = true;
  /// Whether tied_init also covers the feature processors.
  bool tie_features = false;
  uint64_t seed = 0;
};

/// What a tower reads for one item. Token towers use `tokens`, frame towers
/// use `frames`; `id` only labels errors.
struct Utterance {
  std::string_view id;
  std::span<const int> tokens;
  const FrameSequence *frames = nullptr;
};

/// Input front end (token embeddings or feature processor) followed by a
/// sentence encoder.
class EncoderTower {
 public:
  EncoderTower() = default;
  /// `rng` draws the token embedder and sentence encoder, `feature_rng` the
  /// feature processor.
  EncoderTower(const RetrieverConfig &config, const std::string &prefix, Rng *rng, Rng *feature_rng);

  Tensor Encode(const Utterance &utterance) const;

  InputKind input() const { return input_; }
  SentenceEncoder &encoder() { return encoder_; }
  std::vector<Parameter *> Parameters();
  std::vector<const Parameter *> Parameters() const;

 private:
  InputKind input_ = InputKind::kFrames;
  std::optional<FeatureProcessor> features_;
  std::optional<TokenEmbedder> tokens_;
  SentenceEncoder encoder_;
};

/// Bi-encoder (question tower, passage tower). The towers share no
/// parameters.
class RetrieverModel {
 public:
  RetrieverModel() = default;
  explicit RetrieverModel(const RetrieverConfig &config);

  Tensor EncodeQuestion(const Utterance &u) const { return question_.Encode(u); }
  Tensor EncodePassage(const Utterance &u) const { return passage_.Encode(u); }

  const RetrieverConfig &config() const { return config_; }
  InputKind input() const { return config_.input; }
  EncoderTower &question_tower() { return question_; }
  EncoderTower &passage_tower() { return passage_; }

  bool frozen() const { return frozen_; }
  void SetFrozen(bool frozen);

  std::vector<Parameter *> Parameters();
  std::vector<const Parameter *> Parameters() const;

  /// Values of every parameter, in Parameters() order.
  std::vector<std::vector<double>> Snapshot() const;
  void Restore(const std::vector<std::vector<double>> &snapshot);

  /// Hash over parameter names, shapes and values.
  std::string Fingerprint() const;

 private:
  RetrieverConfig config_;
  EncoderTower question_;
  EncoderTower passage_;
  bool frozen_ = false;
};

}  // namespace sparch

#endif  // SPARCH_ENCODERS_RETRIEVER_MODEL_H_
