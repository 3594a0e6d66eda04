// encoders/model-io.cc

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

#include "sparch/encoders/model-io.h"

#include <bit>
#include <fstream>

#include "sparch/base/error.h"

namespace sparch {

using nlohmann::json;

namespace {

constexpr uint32_t kParamMagic = 0x42505053;  // "SPPB"

void PutU32(std::ostream &os, uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t GetU32(std::istream &is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char *>(b), 4)) SPARCH_ERR(kIo) << "truncated parameter file";
  return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
         static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
}

}  // namespace

json RetrieverConfigToJson(const RetrieverConfig &c) {
  return json{
      {"input", InputKindName(c.input)},
      {"init_scale", c.init_scale},
      {"tied_init", c.tied_init},
      {"tie_features", c.tie_features},
      {"seed", c.seed},
      {"features",
       {{"input_dim", c.features.input_dim},
        {"hidden_dim", c.features.hidden_dim},
        {"kernel1", c.features.kernel1},
        {"stride1", c.features.stride1},
        {"kernel2", c.features.kernel2},
        {"stride2", c.features.stride2},
        {"eps", c.features.eps}}},
      {"tokens",
       {{"vocab_size", c.tokens.vocab_size},
        {"dim", c.tokens.dim},
        {"unk_id", c.tokens.unk_id},
        {"init_std", c.tokens.init_std}}},
      {"encoder",
       {{"dim", c.encoder.dim},
        {"num_layers", c.encoder.num_layers},
        {"num_heads", c.encoder.num_heads},
        {"ffn_dim", c.encoder.ffn_dim},
        {"max_positions", c.encoder.max_positions},
        {"position_embeddings", c.encoder.position_embeddings},
        {"final_layer_norm", c.encoder.final_layer_norm},
        {"embedding_init_std", c.encoder.embedding_init_std}}},
  };
}

RetrieverConfig RetrieverConfigFromJson(const json &j) {
  try {
    RetrieverConfig c;
    c.input = ParseInputKind(j.at("input").get<std::string>());
    c.init_scale = j.at("init_scale").get<double>();
    c.tied_init = j.at("tied_init").get<bool>();
    c.tie_features = j.value("tie_features", false);
    c.seed = j.at("seed").get<uint64_t>();
    const json &f = j.at("features");
    c.features.input_dim = f.at("input_dim");
    c.features.hidden_dim = f.at("hidden_dim");
    c.features.kernel1 = f.at("kernel1");
    c.features.stride1 = f.at("stride1");
    c.features.kernel2 = f.at("kernel2");
    c.features.stride2 = f.at("stride2");
    c.features.eps = f.at("eps");
    const json &t = j.at("tokens");
    c.tokens.vocab_size = t.at("vocab_size");
    c.tokens.dim = t.at("dim");
    c.tokens.unk_id = t.at("unk_id");
    c.tokens.init_std = t.at("init_std");
    const json &e = j.at("encoder");
    c.encoder.dim = e.at("dim");
    c.encoder.num_layers = e.at("num_layers");
    c.encoder.num_heads = e.at("num_heads");
    c.encoder.ffn_dim = e.at("ffn_dim");
    c.encoder.max_positions = e.at("max_positions");
    c.encoder.position_embeddings = e.at("position_embeddings");
    c.encoder.final_layer_norm = e.value("final_layer_norm", true);
    c.encoder.embedding_init_std = e.at("embedding_init_std");
    return c;
  } catch (const json::exception &ex) {
    SPARCH_ERR(kData) << "malformed model config: " << ex.what();
  }
}

void WriteParameterFile(const std::filesystem::path &path, const RetrieverModel &model) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) SPARCH_ERR(kIo) << "cannot open " << path << " for writing";
  const auto params = model.Parameters();
  PutU32(os, kParamMagic);
  PutU32(os, 1);
  PutU32(os, static_cast<uint32_t>(params.size()));
  for (const Parameter *p : params) {
    PutU32(os, static_cast<uint32_t>(p->name().size()));
    os.write(p->name().data(), static_cast<std::streamsize>(p->name().size()));
    PutU32(os, static_cast<uint32_t>(p->tensor().rank()));
    for (int d : p->tensor().shape()) PutU32(os, static_cast<uint32_t>(d));
    for (double v : p->tensor().data()) {
      const uint64_t bits = std::bit_cast<uint64_t>(v);
      PutU32(os, static_cast<uint32_t>(bits));
      PutU32(os, static_cast<uint32_t>(bits >> 32));
    }
  }
  if (!os) SPARCH_ERR(kIo) << "write failed for " << path;
}

void ReadParameterFile(const std::filesystem::path &path, RetrieverModel *model) {
  std::ifstream is(path, std::ios::binary);
  if (!is) SPARCH_ERR(kIo) << "cannot open " << path;
  if (GetU32(is) != kParamMagic) SPARCH_ERR(kData) << "bad magic in " << path;
  if (GetU32(is) != 1) SPARCH_ERR(kData) << "unsupported parameter file version in " << path;
  auto params = model->Parameters();
  if (GetU32(is) != params.size())
    SPARCH_ERR(kData) << path << " does not match the model's parameter count";
  for (Parameter *p : params) {
    std::string name(GetU32(is), '\0');
    is.read(name.data(), static_cast<std::streamsize>(name.size()));
    if (name != p->name()) SPARCH_ERR(kData) << "expected parameter " << p->name() << ", found " << name;
    Shape shape(GetU32(is));
    for (int &d : shape) d = static_cast<int>(GetU32(is));
    if (shape != p->tensor().shape())
      SPARCH_ERR(kData) << "shape mismatch for " << name << ": " << ShapeString(shape);
    for (double &v : p->tensor().mutable_data()) {
      const uint64_t lo = GetU32(is), hi = GetU32(is);
      v = std::bit_cast<double>(lo | hi << 32);
    }
  }
}

FrameSequence LoadFrameFeatures(const std::filesystem::path &path, int expected_dim) {
  FrameSequence frames = ReadMatrixFile(path);
  if (expected_dim >= 0 && frames.cols != expected_dim)
    SPARCH_ERR(kDimension) << path << " has feature width " << frames.cols << ", expected " << expected_dim;
  return frames;
}

}  // namespace sparch
