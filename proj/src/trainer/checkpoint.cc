// trainer/checkpoint.cc

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

#include "sparch/trainer/checkpoint.h"

#include <fstream>

#include "sparch/base/error.h"
#include "sparch/base/hash.h"
#include "sparch/encoders/model-io.h"

namespace sparch {

using nlohmann::json;

json TrainConfigToJson(const TrainConfig &c) {
  return {{"batch_size", c.batch_size},   {"learning_rate", c.learning_rate},
          {"warmup_steps", c.warmup_steps}, {"epochs", c.epochs},
          {"alpha", c.alpha},             {"beta", c.beta},
          {"seed", c.seed},               {"eval_every", c.eval_every},
          {"top_k", c.top_k},             {"clip_norm", c.clip_norm},
          {"schedule", LrScheduleName(c.schedule)},
          {"adam_beta1", c.adam_beta1},   {"adam_beta2", c.adam_beta2},
          {"adam_eps", c.adam_eps},       {"max_steps", c.max_steps}};
}

TrainConfig TrainConfigFromJson(const json &j) {
  const json defaults = TrainConfigToJson(TrainConfig{});
  for (const auto &[key, value] : j.items())
    if (!defaults.contains(key)) SPARCH_ERR(kConfig) << "unknown train setting '" << key << "'";
  json merged = defaults;
  merged.update(j);
  try {
    TrainConfig c;
    c.batch_size = merged.at("batch_size").get<int>();
    c.learning_rate = merged.at("learning_rate").get<double>();
    c.warmup_steps = merged.at("warmup_steps").get<int>();
    c.epochs = merged.at("epochs").get<int>();
    c.alpha = merged.at("alpha").get<double>();
    c.beta = merged.at("beta").get<double>();
    c.seed = merged.at("seed").get<uint64_t>();
    c.eval_every = merged.at("eval_every").get<int>();
    c.top_k = merged.at("top_k").get<int>();
    c.clip_norm = merged.at("clip_norm").get<double>();
    c.schedule = ParseLrSchedule(merged.at("schedule").get<std::string>());
    c.adam_beta1 = merged.at("adam_beta1").get<double>();
    c.adam_beta2 = merged.at("adam_beta2").get<double>();
    c.adam_eps = merged.at("adam_eps").get<double>();
    c.max_steps = merged.at("max_steps").get<int>();
    return c;
  } catch (const json::exception &e) {
    SPARCH_ERR(kConfig) << "bad train config: " << e.what();
  }
}

std::string ConfigHash(const json &config) {
  Fnv1a64 hash;
  hash.Update(config.dump());
  return HexDigest(hash.Digest());
}

void SaveCheckpoint(const std::filesystem::path &stem, const RetrieverModel &model,
                    const TrainConfig &train, const CheckpointInfo &info) {
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  std::filesystem::path params = stem, meta = stem;
  params += ".params";
  meta += ".json";
  WriteParameterFile(params, model);
  const json model_json = RetrieverConfigToJson(model.config());
  const json train_json = TrainConfigToJson(train);
  json doc = {{"role", info.role},
              {"model", model_json},
              {"train", train_json},
              {"step", info.step},
              {"dev_topk", info.dev_topk},
              {"fingerprint", model.Fingerprint()},
              {"config_hash", info.config_hash.empty()
                                  ? ConfigHash({{"model", model_json}, {"train", train_json}})
                                  : info.config_hash}};
  std::ofstream os(meta, std::ios::trunc);
  if (!os) SPARCH_ERR(kIo) << "cannot write " << meta;
  os << doc.dump(2) << "\n";
  if (!os) SPARCH_ERR(kIo) << "write failed for " << meta;
}

RetrieverModel LoadCheckpoint(const std::filesystem::path &stem, CheckpointInfo *info) {
  std::filesystem::path params = stem, meta = stem;
  params += ".params";
  meta += ".json";
  std::ifstream is(meta);
  if (!is) SPARCH_ERR(kIo) << "cannot open checkpoint " << meta;
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::exception &e) {
    SPARCH_ERR(kData) << meta << ": " << e.what();
  }
  RetrieverModel model(RetrieverConfigFromJson(doc.at("model")));
  ReadParameterFile(params, &model);
  const std::string recorded = doc.value("fingerprint", "");
  if (model.Fingerprint() != recorded)
    SPARCH_ERR(kFingerprint) << "checkpoint " << stem << " hashes to " << model.Fingerprint()
                             << " but records " << recorded;
  if (info != nullptr) {
    info->step = doc.value("step", 0);
    info->dev_topk = doc.value("dev_topk", 0.0);
    info->fingerprint = recorded;
    info->config_hash = doc.value("config_hash", "");
    info->role = doc.value("role", "");
  }
  return model;
}

}  // namespace sparch
