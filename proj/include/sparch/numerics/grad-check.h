// sparch/numerics/grad-check.h

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

#ifndef SPARCH_NUMERICS_GRAD_CHECK_H_
#define SPARCH_NUMERICS_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sparch/numerics/tensor.h"

namespace sparch {

struct GradCheckOptions {
  double step = 1e-5;
  /// 0 checks every coordinate; otherwise a seeded random subset per tensor.
  int max_coords_per_tensor = 0;
  /// Gradient norms below this are compared in absolute terms.
  double norm_floor = 1e-3;
  uint64_t seed = 0;
};

struct TensorGradReport {
  std::string name;
  bool requires_grad = true;
  size_t coords_checked = 0;
  double max_abs_analytic = 0.0;
  /// ||analytic - numeric|| / max(||analytic||, ||numeric||, norm_floor)
  /// over the checked coordinates; 0 for tensors that take no gradient.
  double rel_error = 0.0;
};

struct GradCheckReport {
  bool finite = true;
  /// Op that first produced a non-finite value, when !finite.
  std::string failing_op;
  double max_rel_error = 0.0;
  std::vector<TensorGradReport> tensors;
};

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

/// Compares reverse-mode gradients of the scalar f() against central
/// differences. Tensors that do not require a gradient (frozen parameters)
/// are not perturbed; their analytic gradient magnitude is still reported.
GradCheckReport CheckGradients(const std::function<Tensor()> &f,
                               const std::vector<NamedTensor> &inputs,
                               const GradCheckOptions &options = {});

std::vector<NamedTensor> ToNamedTensors(const std::vector<Parameter *> &params);

}  // namespace sparch

#endif  // SPARCH_NUMERICS_GRAD_CHECK_H_
