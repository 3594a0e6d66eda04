// encoders/feature-processor.cc

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

#include "sparch/encoders/feature-processor.h"

#include <cmath>

#include "sparch/base/error.h"
#include "sparch/numerics/ops.h"

namespace sparch {

namespace {

Parameter ConvKernel(const std::string &name, int k, int din, int dout, double scale, Rng *rng) {
  std::vector<double> data(static_cast<size_t>(k) * din * dout);
  const double stddev = scale / std::sqrt(static_cast<double>(k * din));
  for (double &v : data) v = rng->Normal(0.0, stddev);
  return Parameter(name, Tensor::FromData({k, din, dout}, std::move(data)));
}

}  // namespace

int FeatureProcessorConfig::OutputLength(int num_frames) const {
  return Conv1dOutputLength(Conv1dOutputLength(num_frames, kernel1, stride1), kernel2, stride2);
}

int FeatureProcessorConfig::MinFrames() const { return kernel1 + (kernel2 - 1) * stride1; }

FeatureProcessor::FeatureProcessor(const FeatureProcessorConfig &config, double init_scale,
                                   const std::string &prefix, Rng *rng)
    : config_(config) {
  if (config.input_dim < 1 || config.hidden_dim < 1 || config.kernel1 < 1 || config.kernel2 < 1 ||
      config.stride1 < 1 || config.stride2 < 1)
    SPARCH_ERR(kConfig) << "feature processor dims, kernels and strides must be positive";
  conv1_kernel_ = ConvKernel(prefix + ".conv1.kernel", config.kernel1, config.input_dim,
                             config.hidden_dim, init_scale, rng);
  conv1_bias_ = Parameter(prefix + ".conv1.bias", Tensor::Zeros({config.hidden_dim}));
  conv2_kernel_ = ConvKernel(prefix + ".conv2.kernel", config.kernel2, config.hidden_dim,
                             config.hidden_dim, init_scale, rng);
  conv2_bias_ = Parameter(prefix + ".conv2.bias", Tensor::Zeros({config.hidden_dim}));
}

Tensor FeatureProcessor::Forward(const Tensor &frames, std::string_view utterance_id) const {
  if (frames.rank() != 2 || frames.cols() != config_.input_dim)
    SPARCH_ERR(kDimension) << "utterance " << utterance_id << ": expected frames of width "
                           << config_.input_dim << ", got " << ShapeString(frames.shape());
  if (frames.rows() < config_.MinFrames())
    SPARCH_ERR(kSequenceTooShort) << "utterance " << utterance_id << " has " << frames.rows()
                                  << " frames; at least " << config_.MinFrames() << " required";
  Tensor x = InstanceNorm(frames, config_.eps);
  x = Gelu(AddBias(Conv1d(x, conv1_kernel_.tensor(), config_.stride1), conv1_bias_.tensor()));
  return Gelu(AddBias(Conv1d(x, conv2_kernel_.tensor(), config_.stride2), conv2_bias_.tensor()));
}

std::vector<Parameter *> FeatureProcessor::Parameters() {
  return {&conv1_kernel_, &conv1_bias_, &conv2_kernel_, &conv2_bias_};
}

std::vector<const Parameter *> FeatureProcessor::Parameters() const {
  return {&conv1_kernel_, &conv1_bias_, &conv2_kernel_, &conv2_bias_};
}

}  // namespace sparch
