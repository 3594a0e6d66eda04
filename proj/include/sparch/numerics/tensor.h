// sparch/numerics/tensor.h

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

#ifndef SPARCH_NUMERICS_TENSOR_H_
#define SPARCH_NUMERICS_TENSOR_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sparch/base/matrix.h"

namespace sparch {

using Shape = std::vector<int>;

namespace internal {

/// One vertex of the recorded computation graph. Leaves (parameters,
/// inputs) have no inputs and no backward function.
struct TensorNode {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until something accumulates into it
  bool requires_grad = false;
  const char *op = "leaf";
  std::vector<std::shared_ptr<TensorNode>> inputs;
  // Reads this node's grad and accumulates into inputs[i]->grad.
  std::function<void(TensorNode &)> backward;

  std::vector<double> &MutableGrad();
};

}  // namespace internal

/// Handle to a dense float64 array with optional reverse-mode gradients.
/// Copies share storage; use Clone() for an independent leaf.
///
/// Rank 1 tensors of shape {n} behave as 1 x n matrices in matrix ops.
/// Scalars have shape {1}.
class Tensor {
 public:
  Tensor() = default;

  static Tensor Zeros(const Shape &shape, bool requires_grad = false);
  static Tensor FromData(const Shape &shape, std::vector<double> data,
                         bool requires_grad = false);
  static Tensor Scalar(double value);
  static Tensor FromMatrix(const Matrix &m);

  bool defined() const { return node_ != nullptr; }
  const Shape &shape() const { return node_->shape; }
  int rank() const { return static_cast<int>(node_->shape.size()); }
  int dim(int i) const { return node_->shape[i]; }
  size_t size() const { return node_->value.size(); }
  /// Matrix view: rank 1 is one row, rank 2 is itself.
  int rows() const;
  int cols() const;

  std::span<const double> data() const { return node_->value; }
  /// Writable storage; only meaningful for leaves (initialization, updates).
  std::span<double> mutable_data() { return node_->value; }
  double item() const;
  double at(int r, int c) const;

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool value) { node_->requires_grad = value; }
  bool has_grad() const { return !node_->grad.empty(); }
  /// Gradient buffer; all zeros if nothing has been accumulated.
  std::span<const double> grad() const;
  std::span<double> mutable_grad() { return node_->MutableGrad(); }
  void ZeroGrad();

  const char *op_name() const { return node_->op; }
  Tensor Clone() const;
  Matrix ToMatrix() const;

  /// Reverse pass from this scalar. Gradients accumulate into every leaf
  /// with requires_grad; the recorded graph behind this tensor is released.
  void Backward();

  const std::shared_ptr<internal::TensorNode> &node() const { return node_; }
  explicit Tensor(std::shared_ptr<internal::TensorNode> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<internal::TensorNode> node_;
};

bool GradEnabled();

/// Disables graph recording on this thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard &) = delete;
  NoGradGuard &operator=(const NoGradGuard &) = delete;

 private:
  bool previous_;
};

/// Named trainable tensor. Copies are deep, so models have value semantics.
class Parameter {
 public:
  Parameter() = default;
  Parameter(std::string name, Tensor tensor);
  Parameter(const Parameter &other);
  Parameter &operator=(const Parameter &other);
  Parameter(Parameter &&) = default;
  Parameter &operator=(Parameter &&) = default;

  const std::string &name() const { return name_; }
  Tensor &tensor() { return tensor_; }
  const Tensor &tensor() const { return tensor_; }
  bool frozen() const { return frozen_; }
  /// Frozen parameters stop requiring gradients and are skipped by optimizers.
  void set_frozen(bool frozen);

 private:
  std::string name_;
  Tensor tensor_;
  bool frozen_ = false;
};

size_t ShapeSize(const Shape &shape);
std::string ShapeString(const Shape &shape);

}  // namespace sparch

#endif  // SPARCH_NUMERICS_TENSOR_H_
