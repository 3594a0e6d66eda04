// sparch/numerics/ops.h

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

#ifndef SPARCH_NUMERICS_OPS_H_
#define SPARCH_NUMERICS_OPS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparch/numerics/tensor.h"

namespace sparch {

// Differentiable operations. Every op checks shapes eagerly and throws a
// dimension error on mismatch; results record a backward function only when
// grad mode is on and some input requires a gradient.

Tensor MatMul(const Tensor &a, const Tensor &b);
/// a * b^T without materializing the transpose.
Tensor MatMulTransposed(const Tensor &a, const Tensor &b);

Tensor Add(const Tensor &a, const Tensor &b);
Tensor Sub(const Tensor &a, const Tensor &b);
Tensor Mul(const Tensor &a, const Tensor &b);
Tensor Scale(const Tensor &x, double factor);
/// x[m x n] + bias[n], broadcast over rows.
Tensor AddBias(const Tensor &x, const Tensor &bias);

/// Exact (erf) GELU.
Tensor Gelu(const Tensor &x);

/// Softmax over the last axis, each row independently, with max subtraction.
Tensor Softmax(const Tensor &x);

/// Row-wise layer normalization with affine gamma/beta of length n.
Tensor LayerNorm(const Tensor &x, const Tensor &gamma, const Tensor &beta, double eps);

/// Standardizes each column of x[T x D] over its T frames. No affine part.
Tensor InstanceNorm(const Tensor &x, double eps);

/// Valid (unpadded) strided convolution over the time axis.
/// x: [T x D_in], kernel: [k x D_in x D_out] -> [floor((T-k)/stride)+1 x D_out].
Tensor Conv1d(const Tensor &x, const Tensor &kernel, int stride);
/// floor((T - k) / stride) + 1, or 0 when T < k.
int Conv1dOutputLength(int num_frames, int kernel_size, int stride);

/// Gathers rows of table[V x d]; ids must already be in range.
Tensor EmbeddingLookup(const Tensor &table, std::span<const int> ids);

Tensor SliceRows(const Tensor &x, int start, int count);
Tensor SliceCols(const Tensor &x, int start, int count);
/// Row r of a matrix as a rank-1 tensor.
Tensor SelectRow(const Tensor &x, int r);
/// Stacks matrices (or rank-1 rows) vertically; all must share cols().
Tensor ConcatRows(std::span<const Tensor> parts);
Tensor ConcatCols(std::span<const Tensor> parts);

Tensor Sum(const Tensor &x);
Tensor Dot(const Tensor &a, const Tensor &b);

/// Mean over rows of -log softmax(logits[i])[targets[i]], via log-sum-exp.
/// Throws a non-finite error naming the first bad row.
Tensor CrossEntropyRows(const Tensor &logits, std::span<const int> targets);

/// Throws a non-finite error mentioning `what` if x holds NaN or Inf.
void CheckFinite(const Tensor &x, std::string_view what);

/// Op name of the earliest node (in evaluation order) behind `root` whose
/// value is non-finite; empty if none. Only walks graphs still recorded.
std::string FindNonFiniteOp(const Tensor &root);

}  // namespace sparch

#endif  // SPARCH_NUMERICS_OPS_H_
