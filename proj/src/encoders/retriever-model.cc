// encoders/retriever-model.cc

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

#include "sparch/encoders/retriever-model.h"

#include <algorithm>

#include "sparch/base/error.h"
#include "sparch/base/hash.h"

namespace sparch {

const char *InputKindName(InputKind kind) { return kind == InputKind::kTokens ? "tokens" : "frames"; }

InputKind ParseInputKind(std::string_view name) {
  if (name == "tokens") return InputKind::kTokens;
  if (name == "frames") return InputKind::kFrames;
  SPARCH_ERR(kConfig) << "unknown input kind '" << name << "' (expected tokens|frames)";
}

EncoderTower::EncoderTower(const RetrieverConfig &config, const std::string &prefix, Rng *rng,
                           Rng *feature_rng)
    : input_(config.input) {
  SentenceEncoderConfig enc = config.encoder;
  if (input_ == InputKind::kFrames) {
    features_.emplace(config.features, config.init_scale, prefix + ".features", feature_rng);
    enc.input_dim = config.features.hidden_dim;
  } else {
    tokens_.emplace(config.tokens, prefix + ".tokens", rng);
    enc.input_dim = config.tokens.dim;
  }
  encoder_ = SentenceEncoder(enc, config.init_scale, prefix + ".encoder", rng);
}

Tensor EncoderTower::Encode(const Utterance &u) const {
  if (input_ == InputKind::kTokens) {
    if (u.tokens.empty()) SPARCH_ERR(kEmptyInput) << "utterance " << u.id << " has no tokens";
    return encoder_.Encode(tokens_->Embed(u.tokens));
  }
  if (u.frames == nullptr) SPARCH_ERR(kData) << "utterance " << u.id << " has no frame features";
  return encoder_.Encode(features_->Forward(Tensor::FromMatrix(*u.frames), u.id));
}

std::vector<Parameter *> EncoderTower::Parameters() {
  std::vector<Parameter *> out = features_ ? features_->Parameters() : tokens_->Parameters();
  for (Parameter *p : encoder_.Parameters()) out.push_back(p);
  return out;
}

std::vector<const Parameter *> EncoderTower::Parameters() const {
  std::vector<const Parameter *> out = features_ ? features_->Parameters() : tokens_->Parameters();
  for (const Parameter *p : encoder_.Parameters()) out.push_back(p);
  return out;
}

RetrieverModel::RetrieverModel(const RetrieverConfig &config) : config_(config) {
  Rng question_rng(MixSeed(config.seed, 1));
  Rng passage_rng(config.tied_init ? MixSeed(config.seed, 1) : MixSeed(config.seed, 2));
  Rng question_features(MixSeed(config.seed, 3));
  Rng passage_features(config.tied_init && config.tie_features ? MixSeed(config.seed, 3)
                                                               : MixSeed(config.seed, 4));
  question_ = EncoderTower(config, "question", &question_rng, &question_features);
  passage_ = EncoderTower(config, "passage", &passage_rng, &passage_features);
}

void RetrieverModel::SetFrozen(bool frozen) {
  frozen_ = frozen;
  for (Parameter *p : Parameters()) p->set_frozen(frozen);
}

std::vector<Parameter *> RetrieverModel::Parameters() {
  std::vector<Parameter *> out = question_.Parameters();
  for (Parameter *p : passage_.Parameters()) out.push_back(p);
  return out;
}

std::vector<const Parameter *> RetrieverModel::Parameters() const {
  std::vector<const Parameter *> out = question_.Parameters();
  for (const Parameter *p : passage_.Parameters()) out.push_back(p);
  return out;
}

std::vector<std::vector<double>> RetrieverModel::Snapshot() const {
  std::vector<std::vector<double>> out;
  for (const Parameter *p : Parameters())
    out.emplace_back(p->tensor().data().begin(), p->tensor().data().end());
  return out;
}

void RetrieverModel::Restore(const std::vector<std::vector<double>> &snapshot) {
  std::vector<Parameter *> params = Parameters();
  if (snapshot.size() != params.size())
    SPARCH_ERR(kData) << "snapshot holds " << snapshot.size() << " tensors, model has " << params.size();
  for (size_t i = 0; i < params.size(); ++i) {
    std::span<double> dst = params[i]->tensor().mutable_data();
    if (snapshot[i].size() != dst.size())
      SPARCH_ERR(kData) << "snapshot size mismatch for " << params[i]->name();
    std::copy(snapshot[i].begin(), snapshot[i].end(), dst.begin());
  }
}

std::string RetrieverModel::Fingerprint() const {
  Fnv1a64 hash;
  for (const Parameter *p : Parameters()) {
    hash.Update(p->name());
    for (int d : p->tensor().shape()) hash.Update(static_cast<uint64_t>(d));
    hash.Update(p->tensor().data());
  }
  return HexDigest(hash.Digest());
}

}  // namespace sparch
