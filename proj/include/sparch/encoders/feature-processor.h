// sparch/encoders/feature-processor.h

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

#ifndef SPARCH_ENCODERS_FEATURE_PROCESSOR_H_
#define SPARCH_ENCODERS_FEATURE_PROCESSOR_H_

#include <string>
#include <string_view>
#include <vector>

#include "sparch/base/matrix.h"
#include "sparch/base/random.h"
#include "sparch/numerics/tensor.h"

namespace sparch {

struct FeatureProcessorConfig {
  int input_dim = 16;
  int hidden_dim = 32;
  int kernel1 = 4;
  int stride1 = 4;
  int kernel2 = 3;
  int stride2 = 3;
  double eps = 1e-5;

  /// Rows left after both convolutions; 0 if the input is too short.
  int OutputLength(int num_frames) const;
  /// Smallest frame count that yields one output row.
  int MinFrames() const;
};

/// Instance norm over time, then two strided convolutions each followed by
/// GELU. Shortens a frame sequence by roughly stride1 * stride2.
class FeatureProcessor {
 public:
  FeatureProcessor() = default;
  FeatureProcessor(const FeatureProcessorConfig &config, double init_scale,
                   const std::string &prefix, Rng *rng);

  /// Throws kSequenceTooShort (naming utterance_id) below MinFrames().
  Tensor Forward(const Tensor &frames, std::string_view utterance_id) const;

  const FeatureProcessorConfig &config() const { return config_; }
  std::vector<Parameter *> Parameters();
  std::vector<const Parameter *> Parameters() const;

 private:
  FeatureProcessorConfig config_;
  Parameter conv1_kernel_, conv1_bias_;
  Parameter conv2_kernel_, conv2_bias_;
};

}  // namespace sparch

#endif  // SPARCH_ENCODERS_FEATURE_PROCESSOR_H_
