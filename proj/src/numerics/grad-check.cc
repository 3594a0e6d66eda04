// numerics/grad-check.cc

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

#include "sparch/numerics/grad-check.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparch/base/error.h"
#include "sparch/base/random.h"
#include "sparch/numerics/ops.h"

namespace sparch {

std::vector<NamedTensor> ToNamedTensors(const std::vector<Parameter *> &params) {
  std::vector<NamedTensor> out;
  out.reserve(params.size());
  for (Parameter *p : params) out.push_back({p->name(), p->tensor()});
  return out;
}

GradCheckReport CheckGradients(const std::function<Tensor()> &f,
                               const std::vector<NamedTensor> &inputs,
                               const GradCheckOptions &options) {
  GradCheckReport report;
  for (const NamedTensor &in : inputs) {
    Tensor t = in.tensor;
    t.ZeroGrad();
  }

  Tensor out;
  try {
    out = f();
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::kNonFinite) throw;
    report.finite = false;
    report.failing_op = e.what();
    return report;
  }
  if (out.size() != 1) SPARCH_ERR(kDimension) << "grad check needs a scalar function";
  if (!std::isfinite(out.item())) {
    report.finite = false;
    report.failing_op = FindNonFiniteOp(out);
    return report;
  }
  out.Backward();

  Rng rng(options.seed);
  for (const NamedTensor &in : inputs) {
    Tensor t = in.tensor;
    TensorGradReport tr;
    tr.name = in.name;
    tr.requires_grad = t.requires_grad();
    const std::vector<double> analytic(t.grad().begin(), t.grad().end());
    for (double g : analytic) tr.max_abs_analytic = std::max(tr.max_abs_analytic, std::abs(g));
    if (!tr.requires_grad) {
      report.tensors.push_back(tr);
      continue;
    }

    std::vector<size_t> coords(t.size());
    std::iota(coords.begin(), coords.end(), size_t{0});
    if (options.max_coords_per_tensor > 0 &&
        coords.size() > static_cast<size_t>(options.max_coords_per_tensor)) {
      rng.Shuffle(&coords);
      coords.resize(options.max_coords_per_tensor);
      std::sort(coords.begin(), coords.end());
    }

    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    NoGradGuard no_grad;
    for (size_t i : coords) {
      double &v = t.mutable_data()[i];
      const double saved = v;
      v = saved + options.step;
      const double plus = f().item();
      v = saved - options.step;
      const double minus = f().item();
      v = saved;
      if (!std::isfinite(plus) || !std::isfinite(minus)) {
        report.finite = false;
        report.failing_op = "perturbed evaluation of " + in.name;
        return report;
      }
      const double numeric = (plus - minus) / (2.0 * options.step);
      diff2 += (analytic[i] - numeric) * (analytic[i] - numeric);
      a2 += analytic[i] * analytic[i];
      n2 += numeric * numeric;
    }
    tr.coords_checked = coords.size();
    const double denom = std::max({std::sqrt(a2), std::sqrt(n2), options.norm_floor});
    tr.rel_error = std::sqrt(diff2) / denom;
    report.max_rel_error = std::max(report.max_rel_error, tr.rel_error);
    report.tensors.push_back(tr);
  }
  return report;
}

}  // namespace sparch
