// sparch/encoders/model-io.h

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

#ifndef SPARCH_ENCODERS_MODEL_IO_H_
#define SPARCH_ENCODERS_MODEL_IO_H_

#include <filesystem>

#include "json.hpp"
#include "sparch/base/matrix.h"
#include "sparch/encoders/retriever-model.h"

namespace sparch {

nlohmann::json RetrieverConfigToJson(const RetrieverConfig &config);
RetrieverConfig RetrieverConfigFromJson(const nlohmann::json &j);

// Parameter blob: little-endian uint32 magic "SPPB", version 1, count; then
// per tensor: uint32 name length, name bytes, uint32 rank, uint32 dims,
// float64 values. Order follows RetrieverModel::Parameters().
void WriteParameterFile(const std::filesystem::path &path, const RetrieverModel &model);
/// Loads values into an already-constructed model of matching layout.
void ReadParameterFile(const std::filesystem::path &path, RetrieverModel *model);

/// Externally precomputed frame features in the binary matrix format.
/// expected_dim < 0 skips the width check.
FrameSequence LoadFrameFeatures(const std::filesystem::path &path, int expected_dim = -1);

}  // namespace sparch

#endif  // SPARCH_ENCODERS_MODEL_IO_H_
