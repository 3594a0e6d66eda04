// sparch/trainer/checkpoint.h

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

#ifndef SPARCH_TRAINER_CHECKPOINT_H_
#define SPARCH_TRAINER_CHECKPOINT_H_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "sparch/encoders/retriever-model.h"
#include "sparch/trainer/trainer.h"

namespace sparch {

nlohmann::json TrainConfigToJson(const TrainConfig &config);
/// Missing keys keep defaults; unknown keys are a kConfig error.
TrainConfig TrainConfigFromJson(const nlohmann::json &j);

struct CheckpointInfo {
  int step = 0;
  double dev_topk = 0.0;
  std::string fingerprint;
  std::string config_hash;
  std::string role;  // "teacher" or "student"
};

/// Writes <stem>.params (parameter blob) and <stem>.json (model config,
/// train config, step, dev metric, fingerprint, config hash).
void SaveCheckpoint(const std::filesystem::path &stem, const RetrieverModel &model,
                    const TrainConfig &train, const CheckpointInfo &info);
/// Rebuilds the model from <stem>.json and loads <stem>.params; throws
/// kFingerprint when the loaded values do not hash to the recorded value.
RetrieverModel LoadCheckpoint(const std::filesystem::path &stem, CheckpointInfo *info = nullptr);

std::string ConfigHash(const nlohmann::json &config);

}  // namespace sparch

#endif  // SPARCH_TRAINER_CHECKPOINT_H_
